#pragma once

#include <cstdint>
#include <string>

namespace crowdlod {

// One row of the hash-grid LoD preset chain. Hash levels and features per
// level are fixed; log2_hashmap_size drops by exactly 1 per level while the
// MLPs narrow.
struct NerfPreset {
    int lod = 0;
    int hash_levels = 12;        // L
    int features_per_level = 2;  // F
    int log2_hashmap_size = 18;  // T = 2^this
    int base_resolution = 16;
    int density_neurons = 128;
    int density_layers = 1;
    int sh_degree = 4; // directional encoding: SH of this degree + identity
    int rgb_neurons = 64;
    int rgb_layers = 2;
};

// Preset for lod 0..3. Throws std::out_of_range otherwise.
NerfPreset nerf_preset(int lod);

// Upper-bound feature slot count: L * 2^log2_hashmap_size * F.
std::uint64_t hash_capacity(const NerfPreset& preset);

// JSON configuration document with the trainer's conventional key names
// (encoding/network/dir_encoding/rgb_network). Deterministic key order;
// two emissions of the same preset are byte-identical.
std::string emit_nerf_config(const NerfPreset& preset);

// Inverse of emit_nerf_config. Throws IoError on malformed documents.
NerfPreset parse_nerf_config(const std::string& text);

// Workflow: write the config for one LoD to a file.
void emit_nerf_config_file(int lod, const std::string& out_path);

} // namespace crowdlod
