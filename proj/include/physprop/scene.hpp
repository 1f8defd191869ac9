#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <variant>

namespace physprop {

enum class Property { kElasticity, kViscosity, kFriction };
enum class Domain { kA1, kA2 };
enum class MotionAxis { kX, kY };

std::string to_string(Property p);
std::string to_string(Domain d);
std::string to_string(MotionAxis a);
Property property_from_string(const std::string& s);
Domain domain_from_string(const std::string& s);
MotionAxis motion_axis_from_string(const std::string& s);

inline constexpr double kDefaultGravity = 9.81;  // m/s^2

/// Camera placement on a ring around the scene origin.
/// Position is (R cos(azimuth), R sin(azimuth), height); orientation is a
/// look-at toward `look_at` with world +z as the up reference.
struct CameraPose {
  double radius = 1.5;
  double height = 1.0;
  double azimuth = 0.0;  // radians from +x
  Eigen::Vector3d look_at = Eigen::Vector3d::Zero();

  Eigen::Vector3d position() const {
    return {radius * std::cos(azimuth), radius * std::sin(azimuth), height};
  }
};

/// Ball drop scene. `drop_height` is the height of the ball's lowest point
/// above the ground at release; the ball starts at rest.
struct ElasticityScene {
  double restitution = 0.5;  // in (0,1)
  double drop_height = 0.3;  // m
  double ball_radius = 0.1;  // m
  double gravity = kDefaultGravity;
  CameraPose camera;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();  // metadata only
};

/// Liquid column scene. The column falls `drop_height` before contact, then
/// its ground footprint grows linearly with slope spread_constant/viscosity.
struct ViscosityScene {
  double viscosity = 1e-3;         // simulator units, in [5e-5, 1e-2]
  double column_radius = 0.05;     // m
  double column_height = 0.1;      // m
  double drop_height = 0.056;      // m
  double spread_constant = 9e-6;   // area units per second per (1/viscosity)
  CameraPose camera;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();
};

/// Cube sliding on the ground plane along one axis with initial speed v0.
struct FrictionScene {
  double friction_coeff = 0.1;  // mu_k, in (0, 0.2]
  Eigen::Vector2d initial_position = Eigen::Vector2d::Zero();  // m
  double initial_speed = 0.8;   // m/s along motion_axis
  MotionAxis motion_axis = MotionAxis::kX;
  double cube_size = 0.1;       // m
  double gravity = kDefaultGravity;
  CameraPose camera;
  Eigen::Vector3d color = Eigen::Vector3d::Zero();
};

using Scene = std::variant<ElasticityScene, ViscosityScene, FrictionScene>;

/// Throw std::invalid_argument if a scene violates its invariants.
void validate(const CameraPose& pose);
void validate(const ElasticityScene& scene);
void validate(const ViscosityScene& scene);
void validate(const FrictionScene& scene);
void validate(const Scene& scene);

Property property_of(const Scene& scene);

/// The target physical property value of a scene (e, mu, or mu_k).
double ground_truth_of(const Scene& scene);

const CameraPose& camera_of(const Scene& scene);

}  // namespace physprop
