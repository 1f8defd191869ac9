#pragma once

#include <Eigen/Core>
#include <array>

namespace physprop {

using Quad2 = std::array<Eigen::Vector2d, 4>;

/// Plane-to-plane projective map, defined up to scale. Stored normalized so
/// the bottom-right entry is 1 whenever it is nonzero.
struct Homography {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
};

/// True when any three of the four points are (near-)collinear.
bool has_collinear_triple(const Quad2& pts, double rel_tol = 1e-9);

/// Four-point direct linear transform with Hartley pre-normalization
/// (centroid to the origin, mean distance sqrt(2)). Throws
/// DegenerateConfigurationError on a collinear triple in either set.
Homography estimate_homography(const Quad2& src, const Quad2& dst);

/// Apply with dehomogenization. Throws PointAtInfinityError when the
/// homogeneous third coordinate vanishes.
Eigen::Vector2d apply_homography(const Homography& h, const Eigen::Vector2d& point);

Homography inverse(const Homography& h);
Homography compose(const Homography& outer, const Homography& inner);

/// |det J| of the dehomogenized map at a point: local area scale factor.
/// For H with third row (g, h, i) and w = g x + h y + i, det J = det(H) / w^3.
double homography_area_scale(const Eigen::Matrix3d& h, const Eigen::Vector2d& point);

}  // namespace physprop
