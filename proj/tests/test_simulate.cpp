#include <cmath>

#include "doctest.h"
#include "physprop/sampling.hpp"
#include "physprop/simulate.hpp"

using namespace physprop;

namespace {

ElasticityScene bounce_scene(double e, double h) {
  ElasticityScene s;
  s.restitution = e;
  s.drop_height = h;
  s.ball_radius = 0.1;
  return s;
}

double first_impact_time(const ElasticityScene& s) {
  return std::sqrt(2.0 * s.drop_height / s.gravity);
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("first bounce apex is e^2 h") {
  const ElasticityScene s = bounce_scene(0.5, 1.0);
  const double v0 = std::sqrt(2.0 * s.gravity * s.drop_height);
  const double t_apex = first_impact_time(s) + s.restitution * v0 / s.gravity;
  CHECK(bounce_height_at(s, t_apex) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("restitution round-trips through the apex height") {
  for (const double e : {0.1, 0.37, 0.5, 0.82, 0.95}) {
    const ElasticityScene s = bounce_scene(e, 0.33);
    const double v0 = std::sqrt(2.0 * s.gravity * s.drop_height);
    const double t_apex = first_impact_time(s) + e * v0 / s.gravity;
    const double h_bounce = bounce_height_at(s, t_apex);
    CHECK(std::sqrt(h_bounce / s.drop_height) == doctest::Approx(e).epsilon(1e-12));
  }
}

TEST_CASE("second apex of e=0.9 h=0.3 is 0.19683") {
  const ElasticityScene s = bounce_scene(0.9, 0.3);
  const double v0 = std::sqrt(2.0 * s.gravity * s.drop_height);
  const double t0 = first_impact_time(s);
  const double flight1 = 2.0 * s.restitution * v0 / s.gravity;
  const double t_apex2 = t0 + flight1 + s.restitution * s.restitution * v0 / s.gravity;
  CHECK(bounce_height_at(s, t_apex2) == doctest::Approx(0.19683).epsilon(1e-12));
}

TEST_CASE("consecutive apex heights decrease by e^2") {
  const ElasticityScene s = bounce_scene(0.8, 0.4);
  const double v0 = std::sqrt(2.0 * s.gravity * s.drop_height);
  double t = first_impact_time(s);
  double prev_apex = s.drop_height;
  double v = s.restitution * v0;
  for (int n = 1; n <= 5; ++n) {
    const double apex = bounce_height_at(s, t + v / s.gravity);
    CHECK(apex / prev_apex ==
          doctest::Approx(s.restitution * s.restitution).epsilon(1e-9));
    CHECK(apex < prev_apex);
    prev_apex = apex;
    t += 2.0 * v / s.gravity;
    v *= s.restitution;
  }
}

TEST_CASE("ball centroid never sinks below its radius") {
  const ElasticityScene s = bounce_scene(0.65, 0.3);
  const BallTrack track = simulate_bounce(s);
  REQUIRE(track.times.size() == track.centroids.size());
  REQUIRE(track.times.size() >= 2);
  for (const auto& c : track.centroids) CHECK(c.z() >= s.ball_radius - 1e-15);
}

TEST_CASE("bounce track is bit-identical across runs") {
  const ElasticityScene s = bounce_scene(0.42, 0.37);
  const BallTrack a = simulate_bounce(s);
  const BallTrack b = simulate_bounce(s);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    CHECK(a.times[i] == b.times[i]);
    CHECK(a.centroids[i] == b.centroids[i]);
  }
}

TEST_CASE("spread slope is c over mu") {
  ViscosityScene s;
  s.viscosity = 1e-3;
  s.spread_constant = 1e-5;
  const double t_c = std::sqrt(2.0 * s.drop_height / kDefaultGravity);
  const double slope = (spread_area_at(s, t_c + 1.0) - spread_area_at(s, t_c + 0.5)) / 0.5;
  CHECK(slope == doctest::Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("doubling the viscosity halves the growth slope") {
  ViscosityScene s1, s2;
  s1.viscosity = 2e-3;
  s2.viscosity = 4e-3;
  const double t_c = std::sqrt(2.0 * s1.drop_height / kDefaultGravity) + 0.1;
  const double g1 = spread_area_at(s1, t_c + 1.0) - spread_area_at(s1, t_c);
  const double g2 = spread_area_at(s2, t_c + 1.0) - spread_area_at(s2, t_c);
  CHECK(g1 == doctest::Approx(2.0 * g2).epsilon(1e-12));
}

TEST_CASE("footprint equals the column cross-section at contact") {
  ViscosityScene s;  // column radius 0.05
  const SpreadTrack track = simulate_spread(s);
  const double a0 = 3.14159265358979323846 * 0.05 * 0.05;
  for (std::size_t i = 0; i < track.times.size(); ++i)
    if (track.times[i] <= track.contact_time)
      CHECK(track.areas[i] == doctest::Approx(a0).epsilon(1e-12));
  // At least 10 samples past contact.
  int post = 0;
  for (const double t : track.times)
    if (t > track.contact_time) ++post;
  CHECK(post >= 10);
}

TEST_CASE("spread is non-decreasing and exactly linear after contact") {
  ViscosityScene s;
  s.viscosity = 3.3e-4;
  const SpreadTrack track = simulate_spread(s);
  std::vector<double> t_post, a_post;
  for (std::size_t i = 1; i < track.times.size(); ++i) {
    CHECK(track.areas[i] >= track.areas[i - 1]);
    if (track.times[i] > track.contact_time) {
      t_post.push_back(track.times[i]);
      a_post.push_back(track.areas[i]);
    }
  }
  // Line-fit residual on the post-contact stretch.
  const int n = static_cast<int>(t_post.size());
  double mt = 0, ma = 0;
  for (int i = 0; i < n; ++i) {
    mt += t_post[i];
    ma += a_post[i];
  }
  mt /= n;
  ma /= n;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (t_post[i] - mt) * (a_post[i] - ma);
    sxx += (t_post[i] - mt) * (t_post[i] - mt);
  }
  const double k = sxy / sxx;
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(a_post[i] - (ma + k * (t_post[i] - mt))) < 1e-12);
}

TEST_CASE("slide stops at v0 over mu g and covers v0^2 over 2 mu g") {
  FrictionScene s;
  s.friction_coeff = 0.1;
  s.initial_speed = 0.981;
  s.initial_position = {0.0, 0.0};
  s.motion_axis = MotionAxis::kX;
  const double t_stop = s.initial_speed / (s.friction_coeff * s.gravity);
  CHECK(t_stop == doctest::Approx(1.0).epsilon(1e-12));
  const double distance = slide_position_at(s, t_stop) - slide_position_at(s, 0.0);
  CHECK(distance == doctest::Approx(0.4905).epsilon(1e-12));
  // Constant position and zero velocity after the stop.
  CHECK(slide_position_at(s, t_stop + 0.3) == slide_position_at(s, t_stop));
  CHECK(slide_position_at(s, t_stop + 0.7) - slide_position_at(s, t_stop + 0.3) == 0.0);
}

TEST_CASE("slide second difference equals minus mu g before the stop") {
  FrictionScene s;
  s.friction_coeff = 0.15;
  s.initial_speed = 0.9;
  const double fps = 60.0;
  const double dt = 1.0 / fps;
  const double t_stop = s.initial_speed / (s.friction_coeff * s.gravity);
  for (double t = dt; t + dt < t_stop; t += 7 * dt) {
    const double dd = (slide_position_at(s, t + dt) - 2 * slide_position_at(s, t) +
                       slide_position_at(s, t - dt)) /
                      (dt * dt);
    CHECK(dd == doctest::Approx(-s.friction_coeff * s.gravity).epsilon(1e-6));
  }
}

TEST_CASE("slide corners sit around the centroid at cube height") {
  FrictionScene s;
  s.motion_axis = MotionAxis::kY;
  const SlideTrack track = simulate_slide(s);
  const double half = 0.5 * s.cube_size;
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& c : track.corners[i]) {
      mean += c;
      CHECK(c.z() == s.cube_size);
      CHECK(std::abs(std::abs(c.x() - track.centroids[i].x()) - half) < 1e-15);
      CHECK(std::abs(std::abs(c.y() - track.centroids[i].y()) - half) < 1e-15);
    }
    mean /= 4.0;
    CHECK((mean.head<2>() - track.centroids[i].head<2>()).norm() < 1e-15);
  }
}

TEST_CASE("sampled elasticity scenes honor the A1 table ranges") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Scene scene = sample_scene(Property::kElasticity, Domain::kA1, seed);
    const auto& s = std::get<ElasticityScene>(scene);
    CHECK(s.restitution > 0.0);
    CHECK(s.restitution < 1.0);
    CHECK(s.drop_height >= 0.25);
    CHECK(s.drop_height < 0.4);
    CHECK(s.ball_radius == 0.1);
    CHECK(s.camera.radius == 1.5);
    CHECK(s.camera.height >= 0.5);
    CHECK(s.camera.height < 1.5);
    CHECK(s.camera.azimuth >= 0.0);
    CHECK(s.camera.azimuth < 1.5707963267948966);
    CHECK(s.color.z() == 0.0);
    validate(scene);
  }
}

TEST_CASE("sampled friction scenes honor the A2 table ranges") {
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const Scene scene = sample_scene(Property::kFriction, Domain::kA2, seed);
    const auto& s = std::get<FrictionScene>(scene);
    CHECK(s.friction_coeff > 0.0);
    CHECK(s.friction_coeff < 0.2);
    CHECK(s.initial_speed >= 1.0);
    CHECK(s.initial_speed < 1.2);
    CHECK(s.cube_size == 0.1);
    CHECK(s.initial_position.x() >= -0.15);
    CHECK(s.initial_position.x() < -0.1);
    CHECK(s.camera.azimuth >= 1.5707963267948966);
    CHECK(s.camera.azimuth < 6.283185307179586);
    validate(scene);
  }
}

TEST_CASE("scene sampling is deterministic per seed") {
  const Scene a = sample_scene(Property::kViscosity, Domain::kA1, 777);
  const Scene b = sample_scene(Property::kViscosity, Domain::kA1, 777);
  const Scene c = sample_scene(Property::kViscosity, Domain::kA1, 778);
  const auto& va = std::get<ViscosityScene>(a);
  const auto& vb = std::get<ViscosityScene>(b);
  const auto& vc = std::get<ViscosityScene>(c);
  CHECK(va.viscosity == vb.viscosity);
  CHECK(va.camera.azimuth == vb.camera.azimuth);
  CHECK(va.viscosity != vc.viscosity);
}

}  // TEST_SUITE
