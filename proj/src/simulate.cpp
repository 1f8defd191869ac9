#include "physprop/simulate.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace physprop {

namespace {

std::vector<double> frame_times(double duration, double fps) {
  assert(duration > 0 && fps > 0);
  const int n = static_cast<int>(std::floor(duration * fps)) + 1;
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = i / fps;
  return t;
}

}  // namespace

double bounce_height_at(const ElasticityScene& scene, double t) {
  const double g = scene.gravity;
  const double h0 = scene.drop_height;
  const double t0 = std::sqrt(2.0 * h0 / g);  // first impact
  if (t <= t0) return h0 - 0.5 * g * t * t;

  // After impact n the launch speed is e^n * v0 and the flight lasts 2 v_n / g.
  const double e = scene.restitution;
  double v = e * std::sqrt(2.0 * g * h0);
  double s = t - t0;
  for (;;) {
    const double flight = 2.0 * v / g;
    if (s < flight) return v * s - 0.5 * g * s * s;
    // Remaining bounces too small to matter: the ball is at rest.
    if (flight < 1e-12) return 0.0;
    s -= flight;
    v *= e;
  }
}

double spread_area_at(const ViscosityScene& scene, double t) {
  const double a0 = std::numbers::pi * scene.column_radius * scene.column_radius;
  const double t_contact = std::sqrt(2.0 * scene.drop_height / kDefaultGravity);
  if (t <= t_contact) return a0;
  return a0 + scene.spread_constant / scene.viscosity * (t - t_contact);
}

double slide_position_at(const FrictionScene& scene, double t) {
  const double a = scene.friction_coeff * scene.gravity;  // deceleration
  const double t_stop = scene.initial_speed / a;
  const double x0 = scene.motion_axis == MotionAxis::kX ? scene.initial_position.x()
                                                        : scene.initial_position.y();
  const double tt = std::min(t, t_stop);
  return x0 + scene.initial_speed * tt - 0.5 * a * tt * tt;
}

BallTrack simulate_bounce(const ElasticityScene& scene, double duration, double fps) {
  BallTrack track;
  track.times = frame_times(duration, fps);
  track.centroids.reserve(track.times.size());
  for (const double t : track.times) {
    const double z = bounce_height_at(scene, t) + scene.ball_radius;
    track.centroids.emplace_back(0.0, 0.0, z);
  }
  return track;
}

SpreadTrack simulate_spread(const ViscosityScene& scene, double duration, double fps) {
  SpreadTrack track;
  track.times = frame_times(duration, fps);
  track.contact_time = std::sqrt(2.0 * scene.drop_height / kDefaultGravity);
  track.center = Eigen::Vector3d::Zero();
  track.areas.reserve(track.times.size());
  for (const double t : track.times) track.areas.push_back(spread_area_at(scene, t));
  return track;
}

SlideTrack simulate_slide(const FrictionScene& scene, double duration, double fps) {
  SlideTrack track;
  track.times = frame_times(duration, fps);
  track.stop_time = scene.initial_speed / (scene.friction_coeff * scene.gravity);
  const double s = scene.cube_size;
  const double half = 0.5 * s;
  track.centroids.reserve(track.times.size());
  track.corners.reserve(track.times.size());
  for (const double t : track.times) {
    const double u = slide_position_at(scene, t);
    Eigen::Vector3d c;
    if (scene.motion_axis == MotionAxis::kX)
      c = {u, scene.initial_position.y(), half};
    else
      c = {scene.initial_position.x(), u, half};
    track.centroids.push_back(c);
    track.corners.push_back(Corners3{
        Eigen::Vector3d{c.x() - half, c.y() - half, s},
        Eigen::Vector3d{c.x() + half, c.y() - half, s},
        Eigen::Vector3d{c.x() + half, c.y() + half, s},
        Eigen::Vector3d{c.x() - half, c.y() + half, s},
    });
  }
  return track;
}

WorldTrack simulate(const Scene& scene, double fps) {
  return std::visit(
      [fps](const auto& s) -> WorldTrack {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ElasticityScene>)
          return simulate_bounce(s, kBounceDuration, fps);
        else if constexpr (std::is_same_v<T, ViscosityScene>)
          return simulate_spread(s, kSpreadDuration, fps);
        else
          return simulate_slide(s, kSlideDuration, fps);
      },
      scene);
}

}  // namespace physprop
