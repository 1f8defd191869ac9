#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "physprop/gru.hpp"
#include "physprop/observe.hpp"
#include "physprop/scene.hpp"

namespace physprop {

/// Image-height series rescaled so the first ground contact maps to 0 and
/// the drop start maps to 1, with the detected key-point indices.
struct NormalizedTrajectory {
  Eigen::VectorXd values;
  int drop_idx = 0;
  int contact_idx = -1;
  int peak_idx = -1;
  double pixel_span = 0.0;   // y[drop] - y[contact] in pixels
  double noise_sigma = 0.0;  // pixel noise of the source observation
};

/// Detect drop / contact / peak on a moving-average-smoothed copy (window 3)
/// and rescale. contact = first local minimum after the initial descent,
/// peak = first local maximum after contact. Throws NoBounceError when no
/// ascent above the noise floor (3 * noise_sigma) follows the contact.
NormalizedTrajectory normalize_trajectory(const Eigen::VectorXd& y_pixels,
                                          double noise_sigma = 0.0);

enum class Estimator {
  kRatioOracle,     // elasticity, sub-frame refined height ratio
  kPeakRaw,         // elasticity, raw peak-sample heuristic
  kGru,             // elasticity, trained GRU readout
  kSlopeOracle,     // viscosity, inverse area-growth slope
  kParabolaOracle,  // friction, homography-rectified parabola fit
  kParabolaNaive,   // friction, image-space parabola fit (no rectification)
};

std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& s);
Property property_of(Estimator e);

/// A scalar physical-property prediction with provenance.
struct Estimate {
  double value = 0.0;
  Property property = Property::kElasticity;
  Estimator estimator = Estimator::kRatioOracle;
};

/// Height-ratio elasticity estimate, e = sqrt(h_bounce / h_drop).
///
/// Bounce apex and ground level are refined below the frame period: the
/// descent is fitted with a free-fall parabola, the first bounce with a
/// second parabola (sharing the descent curvature when it has too few
/// interior samples), and their intersection gives the ground level. Exact
/// for a fronto-parallel noiseless view at any frame rate.
Estimate estimate_elasticity_ratio(const NormalizedTrajectory& traj);

/// The plain heuristic: e = sqrt(value at the detected peak sample). Noisy
/// by construction (the contact sample overshoots the true ground level by
/// up to one frame of fall); kept as the baseline the GRU readout is
/// compared against.
Estimate estimate_elasticity_peak_raw(const NormalizedTrajectory& traj);

/// GRU regression on the normalized value sequence.
Estimate estimate_elasticity_gru(const NormalizedTrajectory& traj, const GruParams& model);

/// Viscosity from the inverse slope of the normalized footprint area:
/// contact = first frame where the area exceeds the initial area by 1%,
/// areas are normalized by the pre-contact level, k = OLS slope over the
/// post-contact frames, estimate = 1/k.
Estimate estimate_viscosity(const std::vector<double>& areas_px2,
                            const std::vector<double>& times);

/// Friction from a parabola fit to the bird's-eye-rectified track:
/// the first-frame corners are mapped to an axis-aligned square of side
/// cube_size, the same homography rectifies every frame, and
/// x(t) = alpha t^2 + beta t + c is fitted over the moving phase;
/// mu_k = 2 |alpha| / g.
Estimate estimate_friction(const std::vector<CornerPixels>& corners,
                           const std::vector<double>& times, double cube_size,
                           double gravity = kDefaultGravity);

/// Friction fitted directly in image space with only a global metric scale
/// from the first-frame square (no perspective rectification). Biased under
/// oblique views; exists to quantify what the rectification buys.
Estimate estimate_friction_naive(const std::vector<CornerPixels>& corners,
                                 const std::vector<double>& times, double cube_size,
                                 double gravity = kDefaultGravity);

/// Binary decision score sigma(log(e1/e2)) = e1 / (e1 + e2); > 0.5 iff
/// e1 > e2. Throws NonPositiveEstimateError unless both values are > 0.
double relative_score(const Estimate& e1, const Estimate& e2);
double relative_score(double e1, double e2);

}  // namespace physprop
