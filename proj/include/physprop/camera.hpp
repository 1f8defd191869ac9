#pragma once

#include <Eigen/Core>

#include "physprop/scene.hpp"

namespace physprop {

/// Pinhole camera with fixed intrinsics shared by all scenes:
/// 512x512 image, focal 512 px (about 53 degrees FOV), principal point at
/// the center. Pixel convention is the usual one (y grows downward); the
/// observation layer flips y so that up is positive.
struct PinholeCamera {
  CameraPose pose;
  double focal = 512.0;
  double cx = 256.0;
  double cy = 256.0;
  int width = 512;
  int height = 512;
};

/// World-to-camera rotation. Rows are (right, up, forward) with forward
/// toward look_at and up the projection of world +z.
Eigen::Matrix3d camera_rotation(const PinholeCamera& camera);

/// Perspective projection to pixels. Throws BehindCameraError when the
/// point's depth along the optical axis is not positive.
Eigen::Vector2d project(const PinholeCamera& camera, const Eigen::Vector3d& point);

/// Depth of a world point along the optical axis (positive = in front).
double depth_of(const PinholeCamera& camera, const Eigen::Vector3d& point);

/// Homography mapping world plane coordinates (x, y) at height plane_z to
/// pixels; the restriction of the projection to that plane.
Eigen::Matrix3d ground_plane_homography(const PinholeCamera& camera, double plane_z);

}  // namespace physprop
