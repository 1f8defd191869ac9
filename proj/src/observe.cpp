#include "physprop/observe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "physprop/errors.hpp"
#include "physprop/homography.hpp"
#include "physprop/rng.hpp"

namespace physprop {

namespace {

double flip_y(const PinholeCamera& camera, double y_down) {
  return static_cast<double>(camera.height) - y_down;
}

Eigen::Vector2d project_up(const PinholeCamera& camera, const Eigen::Vector3d& p) {
  Eigen::Vector2d px = project(camera, p);
  px.y() = flip_y(camera, px.y());
  return px;
}

}  // namespace

std::size_t frame_count(const ObservationSequence& seq) {
  return std::visit([](const auto& o) { return o.times.size(); }, seq);
}

BallObservation render_observations(const BallTrack& track, const PinholeCamera& camera,
                                    double noise_sigma, std::uint64_t seed) {
  BallObservation obs;
  obs.times = track.times;
  obs.noise_sigma = noise_sigma;
  obs.centroids_px.reserve(track.centroids.size());
  Rng rng(mix_seed(seed, 0x0b5e));
  for (const auto& c : track.centroids) {
    Eigen::Vector2d px = project_up(camera, c);
    if (noise_sigma > 0) {
      px.x() += noise_sigma * rng.gauss();
      px.y() += noise_sigma * rng.gauss();
    }
    obs.centroids_px.push_back(px);
  }
  return obs;
}

SpreadObservation render_observations(const SpreadTrack& track, const PinholeCamera& camera,
                                      double noise_sigma, std::uint64_t seed) {
  // Affine viewing approximation: image area = world area times the squared
  // local scale of the ground-plane map at the impact point.
  if (depth_of(camera, track.center) <= 0)
    throw BehindCameraError("impact point behind the camera");
  const Eigen::Matrix3d hg = ground_plane_homography(camera, track.center.z());
  const double scale2 =
      homography_area_scale(hg, {track.center.x(), track.center.y()});

  SpreadObservation obs;
  obs.times = track.times;
  obs.noise_sigma = noise_sigma;
  obs.areas_px2.reserve(track.areas.size());
  Rng rng(mix_seed(seed, 0x54ead));
  for (const double a : track.areas) {
    double a_px = a * scale2;
    if (noise_sigma > 0) {
      const double circumference = 2.0 * std::sqrt(std::numbers::pi * a_px);
      a_px += noise_sigma * circumference * rng.gauss();
    }
    obs.areas_px2.push_back(a_px);
  }
  return obs;
}

SlideObservation render_observations(const SlideTrack& track, const PinholeCamera& camera,
                                     double noise_sigma, std::uint64_t seed) {
  SlideObservation obs;
  obs.times = track.times;
  obs.noise_sigma = noise_sigma;
  obs.corners_px.reserve(track.corners.size());
  Rng rng(mix_seed(seed, 0x51ade));
  for (const auto& frame : track.corners) {
    CornerPixels px;
    for (int k = 0; k < 4; ++k) {
      px[k] = project_up(camera, frame[k]);
      if (noise_sigma > 0) {
        px[k].x() += noise_sigma * rng.gauss();
        px[k].y() += noise_sigma * rng.gauss();
      }
    }
    obs.corners_px.push_back(px);
  }
  return obs;
}

ObservationSequence render_observations(const WorldTrack& track, const PinholeCamera& camera,
                                        double noise_sigma, std::uint64_t seed) {
  return std::visit(
      [&](const auto& t) -> ObservationSequence {
        return render_observations(t, camera, noise_sigma, seed);
      },
      track);
}

std::vector<std::size_t> subsample_indices(std::size_t frame_count, int n) {
  if (n < 2 || static_cast<std::size_t>(n) > frame_count)
    throw std::out_of_range("subsample count must be in [2, frame_count]");
  std::vector<std::size_t> idx(n);
  for (int k = 0; k < n; ++k) {
    idx[k] = static_cast<std::size_t>(
        std::llround(static_cast<double>(k) * (frame_count - 1) / (n - 1)));
  }
  return idx;
}

namespace {

template <typename Obs>
Obs subsample_one(const Obs& obs, int n) {
  const auto idx = subsample_indices(obs.times.size(), n);
  Obs out;
  out.noise_sigma = obs.noise_sigma;
  out.times.reserve(idx.size());
  for (const auto i : idx) out.times.push_back(obs.times[i]);
  if constexpr (std::is_same_v<Obs, BallObservation>) {
    for (const auto i : idx) out.centroids_px.push_back(obs.centroids_px[i]);
  } else if constexpr (std::is_same_v<Obs, SpreadObservation>) {
    for (const auto i : idx) out.areas_px2.push_back(obs.areas_px2[i]);
  } else {
    for (const auto i : idx) out.corners_px.push_back(obs.corners_px[i]);
  }
  return out;
}

}  // namespace

ObservationSequence subsample_frames(const ObservationSequence& seq, int n) {
  return std::visit(
      [n](const auto& o) -> ObservationSequence { return subsample_one(o, n); }, seq);
}

}  // namespace physprop
