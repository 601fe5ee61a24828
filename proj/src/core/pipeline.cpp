#include "core/pipeline.hpp"

#include "core/common.hpp"
#include "core/decimate.hpp"
#include "core/demo.hpp"
#include "core/impostor.hpp"
#include "core/mesh.hpp"
#include "core/nerf_preset.hpp"
#include "core/png_io.hpp"
#include "core/splat.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace crowdlod {

namespace {

SplatImportance importance_from_string(const std::string& s) {
    if (s == "opacity") return SplatImportance::Opacity;
    if (s == "opacity_volume") return SplatImportance::OpacityVolume;
    throw IoError("unknown splat importance: " + s);
}

std::uint64_t file_bytes(const fs::path& p) { return std::uint64_t(fs::file_size(p)); }

} // namespace

std::string run_pipeline(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open pipeline config: " + config_path);
    ordered_json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw IoError("bad pipeline config " + config_path + ": " + e.what());
    }

    const fs::path out_dir = cfg.at("output_dir").get<std::string>();
    fs::create_directories(out_dir);

    // resolve or synthesize inputs
    fs::path frames_dir, mesh_path, splat_path;
    const bool demo = cfg.contains("demo") && cfg["demo"].value("generate", false);
    if (demo) {
        const auto& d = cfg["demo"];
        const int frame_count = d.value("frames", 60);
        const int frame_size = d.value("frame_size", 256);
        const std::size_t splats = d.value("splats", std::size_t(20000));
        const std::uint32_t seed = d.value("seed", 7u);

        frames_dir = out_dir / "inputs" / "frames";
        fs::create_directories(frames_dir);
        const std::vector<ImageRGBA> frames = demo_sprite_frames(frame_count, frame_size);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%03zu.png", i);
            save_png(frames[i], (frames_dir / name).string());
        }
        mesh_path = out_dir / "inputs" / "sphere.obj";
        save_obj(demo_uv_sphere(), mesh_path.string());
        splat_path = out_dir / "inputs" / "cloud.ply";
        save_splat_ply(demo_splat_cloud(splats, seed), splat_path.string());
    } else {
        const auto& inputs = cfg.at("inputs");
        frames_dir = inputs.at("frames_dir").get<std::string>();
        mesh_path = inputs.at("mesh").get<std::string>();
        splat_path = inputs.at("splats").get<std::string>();
        for (const fs::path& p : {frames_dir, mesh_path, splat_path})
            if (!fs::exists(p)) throw IoError("pipeline input does not exist: " + p.string());
    }

    ordered_json manifest;
    manifest["assets"] = ordered_json::array();
    std::map<std::string, std::uint64_t> totals;
    const auto add_asset = [&](const std::string& kind, const std::string& representation,
                               int lod, const fs::path& path, ordered_json params) {
        ordered_json entry;
        entry["kind"] = kind;
        entry["representation"] = representation;
        entry["lod"] = lod;
        entry["path"] = fs::relative(path, out_dir).generic_string();
        entry["bytes"] = file_bytes(path);
        entry["params"] = std::move(params);
        totals[representation] += file_bytes(path);
        manifest["assets"].push_back(std::move(entry));
    };

    // impostor atlases
    {
        const auto& ic = cfg.at("impostor");
        const std::vector<int> sizes = ic.at("tile_sizes").get<std::vector<int>>();
        const int cols = ic.value("cols", 6);
        const int rows = ic.value("rows", 10);
        const fs::path dir = out_dir / "impostor";
        bake_impostor_dir(frames_dir.string(), sizes, cols, rows, dir.string());
        for (std::size_t level = 0; level < sizes.size(); ++level) {
            const std::string stem = "atlas_l" + std::to_string(level);
            ordered_json params = {{"tile_size", sizes[level]}, {"cols", cols}, {"rows", rows}};
            add_asset("impostor_atlas", "Impostor", int(level), dir / (stem + ".png"), params);
            add_asset("impostor_meta", "Impostor", int(level), dir / (stem + ".json"), params);
        }
    }

    // mesh LoD chain
    {
        const std::vector<double> ratios = cfg.at("mesh").at("ratios").get<std::vector<double>>();
        const fs::path dir = out_dir / "mesh";
        decimate_obj_file(mesh_path.string(), ratios, dir.string());
        for (std::size_t level = 0; level < ratios.size(); ++level) {
            add_asset("mesh_lod", "Mesh", int(level),
                      dir / ("lod" + std::to_string(level) + ".obj"),
                      {{"ratio", ratios[level]}});
        }
    }

    // splat LoD chain
    {
        const auto& sc = cfg.at("splats");
        const std::vector<std::size_t> caps = sc.at("caps").get<std::vector<std::size_t>>();
        const double alpha_min = sc.value("alpha_min", 0.01);
        const SplatImportance importance =
            importance_from_string(sc.value("importance", std::string("opacity")));
        const fs::path dir = out_dir / "splats";
        prune_splats_file(splat_path.string(), caps, alpha_min, importance, dir.string());
        for (std::size_t level = 0; level < caps.size(); ++level) {
            add_asset("splat_lod", "Gaussian", int(level),
                      dir / ("splats_l" + std::to_string(level) + ".ply"),
                      {{"cap", caps[level]}, {"alpha_min", alpha_min}});
        }
    }

    // nerf configs
    {
        const std::vector<int> lods = cfg.at("nerf").at("lods").get<std::vector<int>>();
        const fs::path dir = out_dir / "nerf";
        fs::create_directories(dir);
        for (int lod : lods) {
            const fs::path path = dir / ("config_l" + std::to_string(lod) + ".json");
            emit_nerf_config_file(lod, path.string());
            add_asset("nerf_config", "NeRF", lod, path,
                      {{"log2_hashmap_size", nerf_preset(lod).log2_hashmap_size}});
        }
    }

    ordered_json totals_json;
    for (const auto& [rep, bytes] : totals) totals_json[rep] = bytes;
    manifest["totals_bytes"] = std::move(totals_json);

    const fs::path manifest_path = out_dir / "manifest.json";
    std::ofstream out(manifest_path);
    if (!out) throw IoError("cannot write manifest: " + manifest_path.string());
    out << manifest.dump(2) << '\n';
    return manifest_path.string();
}

} // namespace crowdlod
