// crowdlod command line tool. Built entirely on the C API so it exercises the
// same surface an engine integration would.

#include <crowdlod/crowdlod.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

constexpr int kExitModuleError = 1;
constexpr int kExitUsage = 2;

int report_failure(clod_status status) {
    if (status == CLOD_OK) return 0;
    std::fprintf(stderr, "crowdlod: error: %s\n", clod_last_error());
    return kExitModuleError;
}

bool require_exists(const std::string& path) {
    if (path.empty() || std::filesystem::exists(path)) return true;
    std::fprintf(stderr, "crowdlod: error: input does not exist: %s\n", path.c_str());
    return false;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Representation-aware crowd LoD toolkit"};
    app.set_version_flag("--version", clod_version());
    app.require_subcommand(1);
    int verbose = 0;
    app.add_flag("-v,--verbose", verbose, "Increase log verbosity");

    // bake-impostor
    std::string frames_dir, out_dir;
    std::vector<int> tile_sizes{1080, 540, 270, 135};
    int cols = 6, rows = 10;
    auto* bake = app.add_subcommand("bake-impostor", "Bake stabilized sprite atlases per LoD");
    bake->add_option("--frames", frames_dir, "Directory of numbered PNG frames")->required();
    bake->add_option("--sizes", tile_sizes, "Tile sizes, strictly decreasing")->delimiter(',');
    bake->add_option("--cols", cols, "Atlas columns");
    bake->add_option("--rows", rows, "Atlas rows");
    bake->add_option("--out", out_dir, "Output directory")->required();

    // decimate
    std::string mesh_in;
    std::vector<double> ratios{1.0, 0.5, 0.25, 0.125};
    auto* dec = app.add_subcommand("decimate", "Generate a mesh LoD chain by edge collapse");
    dec->add_option("--in", mesh_in, "Input OBJ mesh")->required();
    dec->add_option("--ratios", ratios, "Face-count ratios in (0,1]")->delimiter(',');
    dec->add_option("--out", out_dir, "Output directory")->required();

    // prune-splats
    std::string splat_in, importance = "opacity";
    std::vector<std::uint64_t> caps{120000, 30000, 7500, 1900};
    double alpha_min = 0.01;
    auto* prune = app.add_subcommand("prune-splats", "Reduce a splat cloud to LoD presets");
    prune->add_option("--in", splat_in, "Input binary PLY splat cloud")->required();
    prune->add_option("--caps", caps, "Per-level count caps, non-increasing")->delimiter(',');
    prune->add_option("--alpha-min", alpha_min, "Opacity prune threshold");
    prune->add_option("--importance", importance, "Ranking: opacity | opacity_volume")
        ->check(CLI::IsMember({"opacity", "opacity_volume"}));
    prune->add_option("--out", out_dir, "Output directory")->required();

    // emit-nerf-config
    int lod = 0;
    std::string out_file;
    auto* nerf = app.add_subcommand("emit-nerf-config", "Write a hash-grid trainer config");
    nerf->add_option("--lod", lod, "LoD level 0..3")->required()->check(CLI::Range(0, 3));
    nerf->add_option("--out", out_file, "Output config file")->required();

    // metrics
    std::string cand_dir, ref_dir, lpips_csv, out_prefix;
    auto* met = app.add_subcommand("metrics", "Score frame sequences (PSNR/SSIM, LPIPS ingest)");
    met->add_option("--candidate", cand_dir, "Candidate frame directory")->required();
    met->add_option("--reference", ref_dir, "Reference frame directory")->required();
    met->add_option("--lpips", lpips_csv, "Optional CSV of frame_index,lpips");
    met->add_option("--out", out_prefix, "Report prefix (writes .txt and .csv)")->required();

    // schedule
    std::string agents_csv, policy_path, catalog_path, budget;
    auto* sched = app.add_subcommand("schedule", "Assign representations/LoDs under a budget");
    sched->add_option("--agents", agents_csv, "CSV of id,footprint_ratio")->required();
    sched->add_option("--policy", policy_path, "Policy JSON (default: built-in)");
    sched->add_option("--catalog", catalog_path, "Asset catalog JSON (default: built-in)");
    sched->add_option("--budget", budget, "Memory budget, e.g. 64MB (default: unlimited)");
    sched->add_option("--out", out_file, "Output assignment JSON")->required();

    // analyze
    std::string trials_csv;
    auto* ana = app.add_subcommand("analyze", "Run the perceptual-study analysis pipeline");
    ana->add_option("--trials", trials_csv, "Trials CSV")->required();
    ana->add_option("--out", out_dir, "Output directory")->required();

    // pipeline
    std::string config_path;
    auto* pipe = app.add_subcommand("pipeline", "Run all asset generators from one config");
    pipe->add_option("--config", config_path, "Pipeline configuration JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    for (const std::string& input : {frames_dir, mesh_in, splat_in, cand_dir, ref_dir, lpips_csv,
                                     policy_path, catalog_path, agents_csv, trials_csv,
                                     config_path})
        if (!require_exists(input)) return kExitUsage;

    if (bake->parsed()) {
        if (verbose) std::fprintf(stderr, "baking %zu atlas level(s)\n", tile_sizes.size());
        return report_failure(clod_bake_impostor(frames_dir.c_str(), tile_sizes.data(),
                                                 tile_sizes.size(), cols, rows, out_dir.c_str()));
    }
    if (dec->parsed()) {
        return report_failure(
            clod_decimate_obj(mesh_in.c_str(), ratios.data(), ratios.size(), out_dir.c_str()));
    }
    if (prune->parsed()) {
        const clod_splat_importance mode = importance == "opacity_volume"
                                               ? CLOD_IMPORTANCE_OPACITY_VOLUME
                                               : CLOD_IMPORTANCE_OPACITY;
        return report_failure(clod_prune_splats(splat_in.c_str(), caps.data(), caps.size(),
                                                alpha_min, mode, out_dir.c_str()));
    }
    if (nerf->parsed()) {
        return report_failure(clod_emit_nerf_config(lod, out_file.c_str()));
    }
    if (met->parsed()) {
        return report_failure(clod_compare_sequences(cand_dir.c_str(), ref_dir.c_str(),
                                                     lpips_csv.empty() ? nullptr
                                                                       : lpips_csv.c_str(),
                                                     out_prefix.c_str()));
    }
    if (sched->parsed()) {
        int overflow = 0;
        const clod_status status =
            clod_schedule(agents_csv.c_str(), policy_path.empty() ? nullptr : policy_path.c_str(),
                          catalog_path.empty() ? nullptr : catalog_path.c_str(),
                          budget.empty() ? nullptr : budget.c_str(), out_file.c_str(), &overflow);
        if (status == CLOD_OK && overflow)
            std::fprintf(stderr, "crowdlod: warning: memory budget not met (overflow)\n");
        return report_failure(status);
    }
    if (ana->parsed()) {
        return report_failure(clod_analyze_trials(trials_csv.c_str(), out_dir.c_str()));
    }
    if (pipe->parsed()) {
        return report_failure(clod_run_pipeline(config_path.c_str()));
    }
    return kExitUsage;
}
