#include "physprop/homography.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "physprop/errors.hpp"

namespace physprop {

namespace {

Eigen::Matrix3d hartley_normalization(const Quad2& pts) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= 4.0;
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= 4.0;
  const double s = mean_dist > 0 ? std::sqrt(2.0) / mean_dist : 1.0;
  Eigen::Matrix3d t;
  t << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return t;
}

void normalize_scale(Eigen::Matrix3d& m) {
  const double scale_ref = m.cwiseAbs().maxCoeff();
  if (std::abs(m(2, 2)) > 1e-12 * scale_ref) {
    m /= m(2, 2);
  } else if (scale_ref > 0) {
    m /= scale_ref;
  }
}

}  // namespace

bool has_collinear_triple(const Quad2& pts, double rel_tol) {
  double scale = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) scale = std::max(scale, (pts[i] - pts[j]).norm());
  const double tol = rel_tol * scale * scale;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        const Eigen::Vector2d a = pts[j] - pts[i];
        const Eigen::Vector2d b = pts[k] - pts[i];
        if (std::abs(a.x() * b.y() - a.y() * b.x()) <= tol) return true;
      }
  return false;
}

Homography estimate_homography(const Quad2& src, const Quad2& dst) {
  if (has_collinear_triple(src))
    throw DegenerateConfigurationError("three source points are collinear");
  if (has_collinear_triple(dst))
    throw DegenerateConfigurationError("three destination points are collinear");

  const Eigen::Matrix3d t_src = hartley_normalization(src);
  const Eigen::Matrix3d t_dst = hartley_normalization(dst);

  Eigen::Matrix<double, 8, 9> a;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d s = t_src * Eigen::Vector3d(src[i].x(), src[i].y(), 1.0);
    const Eigen::Vector3d d = t_dst * Eigen::Vector3d(dst[i].x(), dst[i].y(), 1.0);
    a.row(2 * i) << -s.x(), -s.y(), -1, 0, 0, 0, d.x() * s.x(), d.x() * s.y(), d.x();
    a.row(2 * i + 1) << 0, 0, 0, -s.x(), -s.y(), -1, d.y() * s.x(), d.y() * s.y(), d.y();
  }

  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 9>> svd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 9, 1> h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);

  Homography result;
  result.m = t_dst.inverse() * hn * t_src;
  normalize_scale(result.m);
  return result;
}

Eigen::Vector2d apply_homography(const Homography& h, const Eigen::Vector2d& point) {
  const Eigen::Vector3d w = h.m * Eigen::Vector3d(point.x(), point.y(), 1.0);
  const double scale_ref = h.m.cwiseAbs().maxCoeff() * (1.0 + point.norm());
  if (std::abs(w.z()) <= 1e-15 * scale_ref)
    throw PointAtInfinityError("homogeneous coordinate vanished");
  return {w.x() / w.z(), w.y() / w.z()};
}

Homography inverse(const Homography& h) {
  Homography r;
  r.m = h.m.inverse();
  normalize_scale(r.m);
  return r;
}

Homography compose(const Homography& outer, const Homography& inner) {
  Homography r;
  r.m = outer.m * inner.m;
  normalize_scale(r.m);
  return r;
}

double homography_area_scale(const Eigen::Matrix3d& h, const Eigen::Vector2d& point) {
  const double w = h(2, 0) * point.x() + h(2, 1) * point.y() + h(2, 2);
  return std::abs(h.determinant() / (w * w * w));
}

}  // namespace physprop
