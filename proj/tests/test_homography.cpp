#include <cmath>
#include <Eigen/Dense>

#include "doctest.h"
#include "physprop/errors.hpp"
#include "physprop/homography.hpp"
#include "physprop/rng.hpp"

using namespace physprop;

namespace {

const Quad2 kUnitSquare{Eigen::Vector2d{0, 0}, Eigen::Vector2d{1, 0},
                        Eigen::Vector2d{1, 1}, Eigen::Vector2d{0, 1}};

// Compare up to scale: normalize both by the largest-magnitude entry.
double max_entry_error_up_to_scale(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  Eigen::Index i, j;
  a.cwiseAbs().maxCoeff(&i, &j);
  const Eigen::Matrix3d an = a / a(i, j);
  const Eigen::Matrix3d bn = b / b(i, j);
  return (an - bn).cwiseAbs().maxCoeff();
}

Eigen::Matrix3d random_well_conditioned_h(Rng& rng) {
  for (;;) {
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
    m(2, 0) *= 0.3;  // keep the perspective terms moderate
    m(2, 1) *= 0.3;
    m(2, 2) = 1.0;
    if (std::abs(m.determinant()) > 0.1) return m;
  }
}

}  // namespace

TEST_SUITE("homography") {

TEST_CASE("identical quads give the identity") {
  const Homography h = estimate_homography(kUnitSquare, kUnitSquare);
  CHECK(max_entry_error_up_to_scale(h.m, Eigen::Matrix3d::Identity()) < 1e-9);
}

TEST_CASE("a doubled quad gives diag(2,2,1)") {
  Quad2 dst;
  for (int i = 0; i < 4; ++i) dst[i] = 2.0 * kUnitSquare[i];
  const Homography h = estimate_homography(kUnitSquare, dst);
  CHECK(max_entry_error_up_to_scale(h.m, Eigen::Vector3d(2, 2, 1).asDiagonal().toDenseMatrix()) <
        1e-9);
}

TEST_CASE("random homographies are recovered from four correspondences") {
  Rng rng(90125);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Matrix3d truth = random_well_conditioned_h(rng);
    Homography ht{truth};
    Quad2 src, dst;
    bool usable = true;
    for (int i = 0; i < 4; ++i) {
      src[i] = kUnitSquare[i] + Eigen::Vector2d{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
      try {
        dst[i] = apply_homography(ht, src[i]);
      } catch (const PointAtInfinityError&) {
        usable = false;
        break;
      }
    }
    if (!usable || has_collinear_triple(src, 1e-4) || has_collinear_triple(dst, 1e-4)) continue;
    const Homography est = estimate_homography(src, dst);
    CHECK(max_entry_error_up_to_scale(est.m, truth) < 1e-9);
    // Reprojection of the four destination points.
    for (int i = 0; i < 4; ++i)
      CHECK((apply_homography(est, src[i]) - dst[i]).norm() < 1e-9);
  }
}

TEST_CASE("identity and translation act as expected") {
  const Homography id{Eigen::Matrix3d::Identity()};
  CHECK((apply_homography(id, {0.3, -0.7}) - Eigen::Vector2d{0.3, -0.7}).norm() == 0.0);
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 2) = 2.5;
  t(1, 2) = -1.0;
  CHECK((apply_homography(Homography{t}, {0.3, -0.7}) - Eigen::Vector2d{2.8, -1.7}).norm() <
        1e-15);
}

TEST_CASE("inverse composed with the map is the identity") {
  Rng rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    const Homography h{random_well_conditioned_h(rng)};
    const Homography hinv = inverse(h);
    const Eigen::Vector2d p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    try {
      const Eigen::Vector2d q = apply_homography(hinv, apply_homography(h, p));
      CHECK((q - p).norm() < 1e-9);
    } catch (const PointAtInfinityError&) {
      // The random point fell on the line at infinity preimage; skip.
    }
  }
}

TEST_CASE("application composes like matrix multiplication") {
  Rng rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    const Homography h1{random_well_conditioned_h(rng)};
    const Homography h2{random_well_conditioned_h(rng)};
    const Eigen::Vector2d p{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    try {
      const Eigen::Vector2d a = apply_homography(h2, apply_homography(h1, p));
      const Eigen::Vector2d b = apply_homography(compose(h2, h1), p);
      CHECK((a - b).norm() < 1e-9);
    } catch (const PointAtInfinityError&) {
    }
  }
}

TEST_CASE("affine maps preserve area ratios exactly") {
  Rng rng(246);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m(0, 0) = rng.uniform(0.5, 2.0);
    m(0, 1) = rng.uniform(-0.5, 0.5);
    m(0, 2) = rng.uniform(-1, 1);
    m(1, 0) = rng.uniform(-0.5, 0.5);
    m(1, 1) = rng.uniform(0.5, 2.0);
    m(1, 2) = rng.uniform(-1, 1);
    const Homography h{m};

    auto tri_area = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                       const Eigen::Vector2d& c) {
      return 0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) -
                            (c.x() - a.x()) * (b.y() - a.y()));
    };
    const Eigen::Vector2d p1{0, 0}, p2{1, 0}, p3{0.3, 1.1};
    const Eigen::Vector2d q1{-0.4, 0.2}, q2{0.9, -0.5}, q3{1.3, 1.7};
    const double before = tri_area(p1, p2, p3) / tri_area(q1, q2, q3);
    const double after =
        tri_area(apply_homography(h, p1), apply_homography(h, p2), apply_homography(h, p3)) /
        tri_area(apply_homography(h, q1), apply_homography(h, q2), apply_homography(h, q3));
    CHECK(after == doctest::Approx(before).epsilon(1e-12));

    // Parallel-segment length ratio, same affine invariance.
    const Eigen::Vector2d d{0.37, 0.81};
    const double seg_before = 2.5;  // |2.5 d| / |d|
    const double seg_after =
        (apply_homography(h, Eigen::Vector2d(q1 + 2.5 * d)) - apply_homography(h, q1)).norm() /
        (apply_homography(h, Eigen::Vector2d(p1 + d)) - apply_homography(h, p1)).norm();
    CHECK(seg_after == doctest::Approx(seg_before).epsilon(1e-12));
  }
}

TEST_CASE("collinear triples are rejected") {
  Quad2 bad{Eigen::Vector2d{0, 0}, Eigen::Vector2d{1, 1}, Eigen::Vector2d{2, 2},
            Eigen::Vector2d{0, 1}};
  CHECK(has_collinear_triple(bad));
  CHECK_THROWS_AS(estimate_homography(bad, kUnitSquare), DegenerateConfigurationError);
  CHECK_THROWS_AS(estimate_homography(kUnitSquare, bad), DegenerateConfigurationError);
}

TEST_CASE("area scale matches the determinant formula") {
  Rng rng(864);
  const Eigen::Matrix3d m = random_well_conditioned_h(rng);
  const Eigen::Vector2d p{0.2, -0.1};
  // Numerical Jacobian of the dehomogenized map.
  const double eps = 1e-7;
  const Homography h{m};
  const Eigen::Vector2d fx =
      (apply_homography(h, {p.x() + eps, p.y()}) - apply_homography(h, {p.x() - eps, p.y()})) /
      (2 * eps);
  const Eigen::Vector2d fy =
      (apply_homography(h, {p.x(), p.y() + eps}) - apply_homography(h, {p.x(), p.y() - eps})) /
      (2 * eps);
  const double det_fd = std::abs(fx.x() * fy.y() - fx.y() * fy.x());
  CHECK(homography_area_scale(m, p) == doctest::Approx(det_fd).epsilon(1e-5));
}

}  // TEST_SUITE
