#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crowdlod {

enum class SplatImportance {
    Opacity,       // alpha
    OpacityVolume, // alpha * product of exp(log_scale) axes
};

// Columnar 3D Gaussian splat set. Attribute arrays all hold `count` splats;
// reductions filter rows without modifying values.
struct GaussianCloud {
    int sh_degree = 0;                // 0..3
    std::vector<float> positions;     // 3 per splat
    std::vector<float> log_scales;    // 3 per splat
    std::vector<float> rotations;     // 4 per splat, unit quaternions
    std::vector<float> opacity_logits; // 1 per splat, sigmoid -> alpha
    std::vector<float> sh_coeffs;     // 3*(sh_degree+1)^2 per splat, DC first

    std::size_t count() const { return opacity_logits.size(); }
    std::size_t sh_width() const { return 3 * std::size_t(sh_degree + 1) * (sh_degree + 1); }

    double opacity(std::size_t i) const; // sigmoid of the stored logit
    double volume(std::size_t i) const;  // product of the three axis scales
};

// Checks array lengths, sh width against degree, and quaternion norms
// (within 1e-4). Throws std::invalid_argument.
void validate_cloud(const GaussianCloud& cloud);

// Keeps splats with sigmoid(opacity_logit) >= alpha_min, preserving order.
GaussianCloud prune_opacity(const GaussianCloud& cloud, double alpha_min);

// Keeps the n_max highest-importance splats (ties break by lower original
// index), preserving original relative order.
GaussianCloud cap_count(const GaussianCloud& cloud, std::size_t n_max,
                        SplatImportance importance = SplatImportance::Opacity);

// prune_opacity then cap_count per level; caps must be non-increasing.
std::vector<GaussianCloud> splat_lod_chain(const GaussianCloud& cloud,
                                           const std::vector<std::size_t>& caps, double alpha_min,
                                           SplatImportance importance = SplatImportance::Opacity);

// Analytic payload size: n * 4 bytes * (3 pos + 3 scale + 4 rot + 1 opacity
// + 3*(sh_degree+1)^2 SH) floats. Padding "normal" floats some files carry
// are excluded.
std::uint64_t estimate_splat_size(std::uint64_t n, int sh_degree);

// Binary little-endian PLY with the conventional splat property names
// (x,y,z, optional nx/ny/nz, f_dc_*, f_rest_*, opacity, scale_*, rot_*).
// The writer omits the padding normals; the reader skips them when present.
GaussianCloud load_splat_ply(const std::string& path);
void save_splat_ply(const GaussianCloud& cloud, const std::string& path);

// Workflow: load, reduce at each cap, write <out_dir>/splats_l<k>.ply.
void prune_splats_file(const std::string& in_path, const std::vector<std::size_t>& caps,
                       double alpha_min, SplatImportance importance, const std::string& out_dir);

} // namespace crowdlod
