#include "physprop/sampling.hpp"

#include <numbers>

namespace physprop {

namespace {

constexpr double kPi = std::numbers::pi;

struct Range {
  double lo, hi;
  double draw(Rng& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }
};

// Camera ring radius is fixed at 1.5 m in both domains.
CameraPose sample_pose(Rng& rng, Domain d, const Range& zl_a1, const Range& zl_a2) {
  CameraPose pose;
  pose.radius = 1.5;
  if (d == Domain::kA1) {
    pose.height = rng.uniform(0.5, 1.5);
    pose.azimuth = rng.uniform(0.0, 0.5 * kPi);
    pose.look_at.x() = rng.uniform(-0.1, 0.1);
    pose.look_at.y() = rng.uniform(-0.1, 0.1);
    pose.look_at.z() = zl_a1.draw(rng);
  } else {
    pose.height = rng.uniform(0.25, 0.5);
    pose.azimuth = rng.uniform(0.5 * kPi, 2.0 * kPi);
    pose.look_at.x() = rng.uniform(0.1, 0.2);
    pose.look_at.y() = rng.uniform(-0.2, -0.1);
    pose.look_at.z() = zl_a2.draw(rng);
  }
  return pose;
}

// r,g in (0,1), b = 0 for A1; r = g = 0, b in (0,1) for A2 (ball and liquid).
Eigen::Vector3d sample_color_rg_vs_b(Rng& rng, Domain d) {
  if (d == Domain::kA1) return {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), 0.0};
  return {0.0, 0.0, rng.uniform(0.0, 1.0)};
}

// Friction keeps r,g random in both domains; b opens up in A2.
Eigen::Vector3d sample_color_friction(Rng& rng, Domain d) {
  Eigen::Vector3d c{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), 0.0};
  if (d == Domain::kA2) c.z() = rng.uniform(0.0, 1.0);
  return c;
}

ElasticityScene sample_elasticity(Rng& rng, Domain d, const CameraPose* fixed_camera) {
  ElasticityScene s;
  s.camera = fixed_camera ? *fixed_camera
                          : sample_pose(rng, d, {0.05, 0.27}, {-0.05, 0.05});
  s.color = sample_color_rg_vs_b(rng, d);
  s.drop_height = d == Domain::kA1 ? rng.uniform(0.25, 0.4) : rng.uniform(0.4, 0.5);
  s.ball_radius = 0.1;
  s.gravity = kDefaultGravity;
  s.restitution = rng.uniform_open(0.0, 1.0);
  return s;
}

ViscosityScene sample_viscosity(Rng& rng, Domain d, const CameraPose* fixed_camera) {
  ViscosityScene s;
  s.camera = fixed_camera ? *fixed_camera
                          : sample_pose(rng, d, {0.05, 0.27}, {-0.05, 0.05});
  s.color = sample_color_rg_vs_b(rng, d);
  s.drop_height = 0.056;
  s.column_height = 0.1;
  s.column_radius = 0.05;
  s.viscosity = rng.uniform(5e-5, 1e-2);
  return s;
}

FrictionScene sample_friction(Rng& rng, Domain d, const CameraPose* fixed_camera) {
  FrictionScene s;
  s.camera = fixed_camera ? *fixed_camera
                          : sample_pose(rng, d, {-0.1, 0.12}, {-0.14, -0.1});
  s.color = sample_color_friction(rng, d);
  if (d == Domain::kA1) {
    s.initial_position.x() = rng.uniform(-0.1, 0.1);
    s.initial_position.y() = rng.uniform(-0.1, 0.1);
  } else {
    s.initial_position.x() = rng.uniform(-0.15, -0.1);
    s.initial_position.y() = rng.uniform(0.1, 0.15);
  }
  s.motion_axis = rng.uniform01() < 0.5 ? MotionAxis::kX : MotionAxis::kY;
  // v0^x and v0^y share the same range; only the chosen axis component is used.
  s.initial_speed = d == Domain::kA1 ? rng.uniform(0.6, 1.0) : rng.uniform(1.0, 1.2);
  s.cube_size = 0.1;
  s.gravity = kDefaultGravity;
  s.friction_coeff = rng.uniform_open(0.0, 0.2);
  return s;
}

Scene sample_impl(Property p, Domain d, std::uint64_t seed, const CameraPose* camera) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(p) * 2 + static_cast<std::uint64_t>(d)));
  switch (p) {
    case Property::kElasticity: return sample_elasticity(rng, d, camera);
    case Property::kViscosity: return sample_viscosity(rng, d, camera);
    case Property::kFriction: return sample_friction(rng, d, camera);
  }
  throw std::invalid_argument("bad property");
}

}  // namespace

Scene sample_scene(Property property, Domain domain, std::uint64_t seed) {
  return sample_impl(property, domain, seed, nullptr);
}

CameraPose sample_camera(Property property, Domain domain, Rng& rng) {
  if (property == Property::kFriction)
    return sample_pose(rng, domain, {-0.1, 0.12}, {-0.14, -0.1});
  return sample_pose(rng, domain, {0.05, 0.27}, {-0.05, 0.05});
}

Scene sample_scene_with_camera(Property property, Domain domain, std::uint64_t seed,
                               const CameraPose& camera) {
  return sample_impl(property, domain, seed, &camera);
}

}  // namespace physprop
