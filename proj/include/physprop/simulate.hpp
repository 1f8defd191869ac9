#pragma once

#include <Eigen/Core>
#include <array>
#include <variant>
#include <vector>

#include "physprop/scene.hpp"

namespace physprop {

inline constexpr double kDefaultFps = 60.0;
inline constexpr double kBounceDuration = 2.5;  // s, covers drop + first bounces
inline constexpr double kSpreadDuration = 1.5;  // s, contact + linear growth
inline constexpr double kSlideDuration = 1.2;   // s, keeps the cube inside the camera ring

/// Ball centroid positions over time.
struct BallTrack {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> centroids;
};

/// Ground footprint of the spreading liquid: a disc centered at the impact
/// point whose area is constant (column cross-section) before contact and
/// grows linearly afterwards.
struct SpreadTrack {
  std::vector<double> times;
  std::vector<double> areas;  // m^2
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double contact_time = 0.0;
};

using Corners3 = std::array<Eigen::Vector3d, 4>;

/// Sliding cube: centroid plus the four top-surface corners per frame.
/// Corner order is fixed: (-,-), (+,-), (+,+), (-,+) offsets of half the
/// cube size in the ground-plane axes, at height cube_size.
struct SlideTrack {
  std::vector<double> times;
  std::vector<Eigen::Vector3d> centroids;
  std::vector<Corners3> corners;
  double stop_time = 0.0;
};

using WorldTrack = std::variant<BallTrack, SpreadTrack, SlideTrack>;

/// Height of the ball's lowest point above ground at time t (closed form).
/// Piecewise ballistic: free fall from drop_height, each impact scales the
/// speed by the restitution, so bounce n peaks at e^(2n) * drop_height.
double bounce_height_at(const ElasticityScene& scene, double t);

/// Footprint area at time t (closed form).
double spread_area_at(const ViscosityScene& scene, double t);

/// Position along the motion axis at time t (closed form):
/// x0 + v0 t - mu_k g t^2 / 2 until v reaches zero, constant afterwards.
double slide_position_at(const FrictionScene& scene, double t);

BallTrack simulate_bounce(const ElasticityScene& scene,
                          double duration = kBounceDuration, double fps = kDefaultFps);
SpreadTrack simulate_spread(const ViscosityScene& scene,
                            double duration = kSpreadDuration, double fps = kDefaultFps);
SlideTrack simulate_slide(const FrictionScene& scene,
                          double duration = kSlideDuration, double fps = kDefaultFps);

/// Dispatch on the scene type with the per-scenario default duration.
WorldTrack simulate(const Scene& scene, double fps = kDefaultFps);

}  // namespace physprop
