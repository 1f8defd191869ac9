#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "physprop/camera.hpp"
#include "physprop/simulate.hpp"

namespace physprop {

/// Image-space measurement sequences, the analytic stand-in for per-frame
/// segmentation masks. Pixel y grows upward (flipped from the raw pixel
/// convention at construction).
struct BallObservation {
  std::vector<double> times;
  std::vector<Eigen::Vector2d> centroids_px;
  double noise_sigma = 0.0;
};

struct SpreadObservation {
  std::vector<double> times;
  std::vector<double> areas_px2;
  double noise_sigma = 0.0;
};

using CornerPixels = std::array<Eigen::Vector2d, 4>;

struct SlideObservation {
  std::vector<double> times;
  std::vector<CornerPixels> corners_px;
  double noise_sigma = 0.0;
};

using ObservationSequence = std::variant<BallObservation, SpreadObservation, SlideObservation>;

std::size_t frame_count(const ObservationSequence& seq);

/// Project a world track frame by frame. Gaussian pixel noise of scale
/// noise_sigma is added independently to every coordinate; footprint areas
/// get boundary-jitter noise of scale noise_sigma * 2 sqrt(pi A).
/// Deterministic per seed. Throws BehindCameraError if any state fails to
/// project.
BallObservation render_observations(const BallTrack& track, const PinholeCamera& camera,
                                    double noise_sigma, std::uint64_t seed);
SpreadObservation render_observations(const SpreadTrack& track, const PinholeCamera& camera,
                                      double noise_sigma, std::uint64_t seed);
SlideObservation render_observations(const SlideTrack& track, const PinholeCamera& camera,
                                     double noise_sigma, std::uint64_t seed);
ObservationSequence render_observations(const WorldTrack& track, const PinholeCamera& camera,
                                        double noise_sigma, std::uint64_t seed);

/// Indices of n frames uniformly spaced over [0, frame_count), always
/// including the first and last frame: index_k = round(k (N-1) / (n-1)).
std::vector<std::size_t> subsample_indices(std::size_t frame_count, int n);

/// Keep only n uniformly spaced frames. Throws std::out_of_range unless
/// 2 <= n <= frame_count.
ObservationSequence subsample_frames(const ObservationSequence& seq, int n);

}  // namespace physprop
