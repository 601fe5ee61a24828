#pragma once

#include "core/image.hpp"
#include "core/mesh.hpp"
#include "core/splat.hpp"
#include "core/stats.hpp"

#include <vector>

namespace crowdlod {

// Procedural walker sprite sequence. Limb motion is mirrored about the
// vertical axis so the per-frame alpha bbox keeps a fixed center while its
// width pulses — a naive per-frame crop would breathe, the union-window bake
// must not.
std::vector<ImageRGBA> demo_sprite_frames(int frame_count = 60, int frame_size = 256);

// Watertight UV sphere with 2 * slices * (stacks - 1) triangles
// (51 stacks x 50 slices = exactly 5000 faces).
TriMesh demo_uv_sphere(int stacks = 51, int slices = 50, double radius = 1.0);

// Icosphere by subdivision: 20 * 4^subdivisions faces.
TriMesh demo_icosphere(int subdivisions = 1, double radius = 1.0);

// Random splat cloud with unit quaternions and opacities spread across
// (0.001, 0.999) so a 0.01 prune always bites. Deterministic per seed.
GaussianCloud demo_splat_cloud(std::size_t count, std::uint32_t seed = 7, int sh_degree = 2);

// Synthetic full-factorial study data: every subject x mode x distance x lod
// cell repeated `repetitions` times, choices drawn with representation- and
// condition-dependent weights so real effects exist. Deterministic per seed.
std::vector<stats::TrialRecord> demo_trials(int subjects = 12, int repetitions = 2,
                                            std::uint32_t seed = 11);

} // namespace crowdlod
