#pragma once

#include <cstdint>

#include "physprop/rng.hpp"
#include "physprop/scene.hpp"

namespace physprop {

/// Draw a full scene for one property from the nuisance domain A1 or A2.
/// Every ranged parameter is sampled uniformly from its per-domain range;
/// fixed parameters are set to their shared values. Deterministic for a
/// fixed (property, domain, seed) triple.
Scene sample_scene(Property property, Domain domain, std::uint64_t seed);

/// Camera pose sampler shared by all three scenarios (z_l range differs for
/// friction). Exposed so the dataset generator can hold the viewpoint fixed
/// within a group while resampling everything else.
CameraPose sample_camera(Property property, Domain domain, Rng& rng);

/// Resample a scene's non-viewpoint parameters, keeping the given camera.
Scene sample_scene_with_camera(Property property, Domain domain, std::uint64_t seed,
                               const CameraPose& camera);

}  // namespace physprop
