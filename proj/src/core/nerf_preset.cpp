#include "core/nerf_preset.hpp"

#include "core/common.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <fstream>
#include <stdexcept>

using ordered_json = nlohmann::ordered_json;

namespace crowdlod {

NerfPreset nerf_preset(int lod) {
    static constexpr std::array<NerfPreset, 4> kPresets{{
        {0, 12, 2, 18, 16, 128, 1, 4, 64, 2},
        {1, 12, 2, 17, 16, 64, 1, 3, 32, 2},
        {2, 12, 2, 16, 16, 32, 1, 2, 16, 2},
        {3, 12, 2, 15, 16, 16, 1, 1, 16, 1},
    }};
    if (lod < 0 || lod > 3) throw std::out_of_range("nerf_preset: lod must be in 0..3");
    return kPresets[std::size_t(lod)];
}

std::uint64_t hash_capacity(const NerfPreset& preset) {
    return std::uint64_t(preset.hash_levels) * (1ull << preset.log2_hashmap_size) *
           std::uint64_t(preset.features_per_level);
}

std::string emit_nerf_config(const NerfPreset& preset) {
    ordered_json doc;
    doc["lod"] = preset.lod;
    doc["encoding"] = {
        {"otype", "HashGrid"},
        {"n_levels", preset.hash_levels},
        {"n_features_per_level", preset.features_per_level},
        {"log2_hashmap_size", preset.log2_hashmap_size},
        {"base_resolution", preset.base_resolution},
    };
    doc["network"] = {
        {"otype", "FullyFusedMLP"},
        {"activation", "ReLU"},
        {"output_activation", "None"},
        {"n_neurons", preset.density_neurons},
        {"n_hidden_layers", preset.density_layers},
    };
    doc["dir_encoding"] = {
        {"otype", "Composite"},
        {"nested",
         {
             {{"otype", "SphericalHarmonics"}, {"degree", preset.sh_degree}},
             {{"otype", "Identity"}},
         }},
    };
    doc["rgb_network"] = {
        {"otype", "FullyFusedMLP"},
        {"activation", "ReLU"},
        {"output_activation", "Sigmoid"},
        {"n_neurons", preset.rgb_neurons},
        {"n_hidden_layers", preset.rgb_layers},
    };
    return doc.dump(2) + "\n";
}

NerfPreset parse_nerf_config(const std::string& text) {
    try {
        const ordered_json doc = ordered_json::parse(text);
        NerfPreset p;
        p.lod = doc.at("lod").get<int>();
        const auto& enc = doc.at("encoding");
        p.hash_levels = enc.at("n_levels").get<int>();
        p.features_per_level = enc.at("n_features_per_level").get<int>();
        p.log2_hashmap_size = enc.at("log2_hashmap_size").get<int>();
        p.base_resolution = enc.at("base_resolution").get<int>();
        const auto& net = doc.at("network");
        p.density_neurons = net.at("n_neurons").get<int>();
        p.density_layers = net.at("n_hidden_layers").get<int>();
        p.sh_degree = doc.at("dir_encoding").at("nested").at(0).at("degree").get<int>();
        const auto& rgb = doc.at("rgb_network");
        p.rgb_neurons = rgb.at("n_neurons").get<int>();
        p.rgb_layers = rgb.at("n_hidden_layers").get<int>();
        return p;
    } catch (const ordered_json::exception& e) {
        throw IoError(std::string("bad nerf config: ") + e.what());
    }
}

void emit_nerf_config_file(int lod, const std::string& out_path) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << emit_nerf_config(nerf_preset(lod));
    if (!out) throw IoError("write failed: " + out_path);
}

} // namespace crowdlod
