#include "physprop/scene.hpp"

#include <stdexcept>

namespace physprop {

std::string to_string(Property p) {
  switch (p) {
    case Property::kElasticity: return "elasticity";
    case Property::kViscosity: return "viscosity";
    case Property::kFriction: return "friction";
  }
  return "?";
}

std::string to_string(Domain d) {
  return d == Domain::kA1 ? "A1" : "A2";
}

std::string to_string(MotionAxis a) {
  return a == MotionAxis::kX ? "x" : "y";
}

Property property_from_string(const std::string& s) {
  if (s == "elasticity") return Property::kElasticity;
  if (s == "viscosity") return Property::kViscosity;
  if (s == "friction") return Property::kFriction;
  throw std::invalid_argument("unknown property: " + s);
}

Domain domain_from_string(const std::string& s) {
  if (s == "A1") return Domain::kA1;
  if (s == "A2") return Domain::kA2;
  throw std::invalid_argument("unknown domain: " + s);
}

MotionAxis motion_axis_from_string(const std::string& s) {
  if (s == "x") return MotionAxis::kX;
  if (s == "y") return MotionAxis::kY;
  throw std::invalid_argument("unknown motion axis: " + s);
}

void validate(const CameraPose& pose) {
  if (!(pose.radius > 0)) throw std::invalid_argument("camera radius must be > 0");
  if (!pose.look_at.allFinite()) throw std::invalid_argument("camera look_at must be finite");
  if ((pose.look_at - pose.position()).norm() == 0.0)
    throw std::invalid_argument("camera look_at coincides with camera position");
}

void validate(const ElasticityScene& s) {
  if (!(s.restitution > 0 && s.restitution < 1))
    throw std::invalid_argument("restitution must be in (0,1)");
  if (!(s.drop_height > 0)) throw std::invalid_argument("drop_height must be > 0");
  if (!(s.ball_radius > 0)) throw std::invalid_argument("ball_radius must be > 0");
  if (!(s.gravity > 0)) throw std::invalid_argument("gravity must be > 0");
  validate(s.camera);
}

void validate(const ViscosityScene& s) {
  if (!(s.viscosity > 0)) throw std::invalid_argument("viscosity must be > 0");
  if (!(s.column_radius > 0)) throw std::invalid_argument("column_radius must be > 0");
  if (!(s.column_height > 0)) throw std::invalid_argument("column_height must be > 0");
  if (!(s.drop_height > 0)) throw std::invalid_argument("drop_height must be > 0");
  if (!(s.spread_constant > 0)) throw std::invalid_argument("spread_constant must be > 0");
  validate(s.camera);
}

void validate(const FrictionScene& s) {
  if (!(s.friction_coeff > 0 && s.friction_coeff <= 0.2))
    throw std::invalid_argument("friction_coeff must be in (0, 0.2]");
  if (!(s.initial_speed > 0)) throw std::invalid_argument("initial_speed must be > 0");
  if (!(s.cube_size > 0)) throw std::invalid_argument("cube_size must be > 0");
  if (!(s.gravity > 0)) throw std::invalid_argument("gravity must be > 0");
  validate(s.camera);
}

void validate(const Scene& scene) {
  std::visit([](const auto& s) { validate(s); }, scene);
}

Property property_of(const Scene& scene) {
  if (std::holds_alternative<ElasticityScene>(scene)) return Property::kElasticity;
  if (std::holds_alternative<ViscosityScene>(scene)) return Property::kViscosity;
  return Property::kFriction;
}

double ground_truth_of(const Scene& scene) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ElasticityScene>) return s.restitution;
        else if constexpr (std::is_same_v<T, ViscosityScene>) return s.viscosity;
        else return s.friction_coeff;
      },
      scene);
}

const CameraPose& camera_of(const Scene& scene) {
  return std::visit([](const auto& s) -> const CameraPose& { return s.camera; }, scene);
}

}  // namespace physprop
