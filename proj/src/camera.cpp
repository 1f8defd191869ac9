#include "physprop/camera.hpp"

#include <Eigen/Geometry>

#include <stdexcept>

#include "physprop/errors.hpp"

namespace physprop {

Eigen::Matrix3d camera_rotation(const PinholeCamera& camera) {
  const Eigen::Vector3d position = camera.pose.position();
  const Eigen::Vector3d forward = (camera.pose.look_at - position).normalized();
  Eigen::Vector3d right = forward.cross(Eigen::Vector3d::UnitZ());
  const double n = right.norm();
  if (n < 1e-12)
    throw std::invalid_argument("camera looks straight along world z; up reference undefined");
  right /= n;
  const Eigen::Vector3d up = right.cross(forward);
  Eigen::Matrix3d r;
  r.row(0) = right;
  r.row(1) = up;
  r.row(2) = forward;
  return r;
}

double depth_of(const PinholeCamera& camera, const Eigen::Vector3d& point) {
  const Eigen::Vector3d position = camera.pose.position();
  const Eigen::Vector3d forward = (camera.pose.look_at - position).normalized();
  return forward.dot(point - position);
}

Eigen::Vector2d project(const PinholeCamera& camera, const Eigen::Vector3d& point) {
  const Eigen::Matrix3d r = camera_rotation(camera);
  const Eigen::Vector3d pc = r * (point - camera.pose.position());
  if (!(pc.z() > 1e-12))
    throw BehindCameraError("point at or behind the camera plane");
  return {camera.cx + camera.focal * pc.x() / pc.z(),
          camera.cy - camera.focal * pc.y() / pc.z()};
}

Eigen::Matrix3d ground_plane_homography(const PinholeCamera& camera, double plane_z) {
  const Eigen::Matrix3d r = camera_rotation(camera);
  const Eigen::Vector3d t = -r * camera.pose.position();
  // K [r1 r2 (r3*plane_z + t)] maps (x, y, 1) on the plane to pixels, with
  // the y-down pixel convention baked into K's second row.
  Eigen::Matrix3d k;
  k << camera.focal, 0, camera.cx, 0, -camera.focal, camera.cy, 0, 0, 1;
  Eigen::Matrix3d m;
  m.col(0) = r.col(0);
  m.col(1) = r.col(1);
  m.col(2) = r.col(2) * plane_z + t;
  return k * m;
}

}  // namespace physprop
