// C ABI wrapper over the crowdlod core. Handles are heap-allocated core
// objects; exceptions stop at this boundary and become status codes plus a
// thread-local message.

#include "crowdlod/crowdlod.h"

#include "core/common.hpp"
#include "core/decimate.hpp"
#include "core/image.hpp"
#include "core/impostor.hpp"
#include "core/mesh.hpp"
#include "core/metrics.hpp"
#include "core/nerf_preset.hpp"
#include "core/pipeline.hpp"
#include "core/png_io.hpp"
#include "core/policy.hpp"
#include "core/splat.hpp"
#include "core/stats.hpp"

#include <exception>
#include <new>
#include <string>
#include <vector>

struct clod_image {
    crowdlod::ImageRGBA img;
};
struct clod_atlas {
    crowdlod::SpriteAtlas atlas;
};
struct clod_mesh {
    crowdlod::TriMesh mesh;
};
struct clod_cloud {
    crowdlod::GaussianCloud cloud;
};

namespace {

thread_local std::string g_last_error;

clod_status fail(clod_status code, const char* what) {
    g_last_error = what ? what : "unknown error";
    return code;
}

template <typename Fn>
clod_status guarded(Fn&& fn) {
    try {
        fn();
        return CLOD_OK;
    } catch (const std::invalid_argument& e) {
        return fail(CLOD_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(CLOD_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const crowdlod::IoError& e) {
        return fail(CLOD_ERROR_IO, e.what());
    } catch (const crowdlod::NumericError& e) {
        return fail(CLOD_ERROR_NUMERIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CLOD_ERROR_UNKNOWN, "out of memory");
    } catch (const std::exception& e) {
        return fail(CLOD_ERROR_UNKNOWN, e.what());
    } catch (...) {
        return fail(CLOD_ERROR_UNKNOWN, "unknown error");
    }
}

} // namespace

extern "C" {

const char* clod_version(void) { return "0.1.0"; }

const char* clod_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------------ images */

clod_status clod_image_create(int width, int height, clod_image** out) {
    if (!out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null output handle");
    return guarded([&] { *out = new clod_image{crowdlod::ImageRGBA(width, height)}; });
}

clod_status clod_image_load_png(const char* path, clod_image** out) {
    if (!path || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new clod_image{crowdlod::load_png(path)}; });
}

clod_status clod_image_save_png(const clod_image* img, const char* path) {
    if (!img || !path) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { crowdlod::save_png(img->img, path); });
}

void clod_image_destroy(clod_image* img) { delete img; }

int clod_image_width(const clod_image* img) { return img ? img->img.width() : 0; }

int clod_image_height(const clod_image* img) { return img ? img->img.height() : 0; }

const uint8_t* clod_image_pixels(const clod_image* img) {
    return img ? img->img.data().data() : nullptr;
}

clod_status clod_image_set_pixel(clod_image* img, int x, int y, uint8_t r, uint8_t g, uint8_t b,
                                 uint8_t a) {
    if (!img) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null image");
    if (x < 0 || x >= img->img.width() || y < 0 || y >= img->img.height())
        return fail(CLOD_ERROR_INVALID_ARGUMENT, "pixel out of range");
    img->img.set_pixel(x, y, r, g, b, a);
    return CLOD_OK;
}

clod_status clod_image_alpha_bbox(const clod_image* img, uint8_t threshold, int32_t bbox[4],
                                  int* has_content) {
    if (!img || !bbox || !has_content) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto r = crowdlod::alpha_bbox(img->img, threshold);
        *has_content = r.has_value() ? 1 : 0;
        if (r) {
            bbox[0] = r->x0;
            bbox[1] = r->y0;
            bbox[2] = r->x1;
            bbox[3] = r->y1;
        }
    });
}

clod_status clod_image_resize_area(const clod_image* img, int out_w, int out_h,
                                   clod_image** out) {
    if (!img || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new clod_image{crowdlod::resize_area(img->img, out_w, out_h)}; });
}

clod_status clod_image_composite_over(const clod_image* img, uint8_t bg_r, uint8_t bg_g,
                                      uint8_t bg_b, clod_image** out) {
    if (!img || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded(
        [&] { *out = new clod_image{crowdlod::composite_over(img->img, bg_r, bg_g, bg_b)}; });
}

/* ----------------------------------------------------------------- metrics */

clod_status clod_psnr(const clod_image* a, const clod_image* b, double* psnr_db, int* identical) {
    if (!a || !b || !psnr_db || !identical)
        return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto v = crowdlod::psnr(a->img, b->img);
        *identical = v ? 0 : 1;
        if (v) *psnr_db = *v;
    });
}

clod_status clod_ssim(const clod_image* a, const clod_image* b, double* out) {
    if (!a || !b || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = crowdlod::ssim(a->img, b->img); });
}

clod_status clod_compare_sequences(const char* candidate_dir, const char* reference_dir,
                                   const char* lpips_csv, const char* out_prefix) {
    if (!candidate_dir || !reference_dir)
        return fail(CLOD_ERROR_INVALID_ARGUMENT, "null directory");
    return guarded([&] {
        crowdlod::compare_sequence_dirs(candidate_dir, reference_dir, lpips_csv ? lpips_csv : "",
                                        out_prefix ? out_prefix : "");
    });
}

/* --------------------------------------------------------------- impostors */

clod_status clod_bake_impostor(const char* frames_dir, const int* tile_sizes, size_t n_sizes,
                               int cols, int rows, const char* out_dir) {
    if (!frames_dir || !tile_sizes || n_sizes == 0 || !out_dir)
        return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::vector<int> sizes(tile_sizes, tile_sizes + n_sizes);
        crowdlod::bake_impostor_dir(frames_dir, sizes, cols, rows, out_dir);
    });
}

clod_status clod_atlas_load(const char* sidecar_json, clod_atlas** out) {
    if (!sidecar_json || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new clod_atlas{crowdlod::load_atlas(sidecar_json)}; });
}

void clod_atlas_destroy(clod_atlas* atlas) { delete atlas; }

int clod_atlas_frame_count(const clod_atlas* atlas) {
    return atlas ? atlas->atlas.frame_count : 0;
}

int clod_atlas_tile_size(const clod_atlas* atlas) { return atlas ? atlas->atlas.tile_size : 0; }

clod_status clod_atlas_tile_uv(const clod_atlas* atlas, int frame_index, double uv[4]) {
    if (!atlas || !uv) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const crowdlod::UVRect r = crowdlod::tile_uv(atlas->atlas, frame_index);
        uv[0] = r.u0;
        uv[1] = r.v0;
        uv[2] = r.u1;
        uv[3] = r.v1;
    });
}

clod_status clod_atlas_extract_tile(const clod_atlas* atlas, int frame_index, clod_image** out) {
    if (!atlas || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded(
        [&] { *out = new clod_image{crowdlod::extract_tile(atlas->atlas, frame_index)}; });
}

/* ------------------------------------------------------------------ meshes */

clod_status clod_mesh_load_obj(const char* path, clod_mesh** out) {
    if (!path || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new clod_mesh{crowdlod::load_obj(path)}; });
}

clod_status clod_mesh_save_obj(const clod_mesh* mesh, const char* path) {
    if (!mesh || !path) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { crowdlod::save_obj(mesh->mesh, path); });
}

void clod_mesh_destroy(clod_mesh* mesh) { delete mesh; }

size_t clod_mesh_vertex_count(const clod_mesh* mesh) {
    return mesh ? mesh->mesh.vertex_count() : 0;
}

size_t clod_mesh_face_count(const clod_mesh* mesh) { return mesh ? mesh->mesh.face_count() : 0; }

clod_status clod_mesh_stats(const clod_mesh* mesh, size_t* vertices, size_t* faces,
                            size_t* boundary_edges, size_t* non_manifold_edges) {
    if (!mesh || !vertices || !faces || !boundary_edges || !non_manifold_edges)
        return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const crowdlod::MeshStats s = crowdlod::mesh_stats(mesh->mesh);
        *vertices = s.vertex_count;
        *faces = s.face_count;
        *boundary_edges = s.boundary_edges;
        *non_manifold_edges = s.non_manifold_edges;
    });
}

clod_status clod_mesh_decimate(const clod_mesh* mesh, double ratio, clod_mesh** out) {
    if (!mesh || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new clod_mesh{crowdlod::decimate(mesh->mesh, ratio)}; });
}

clod_status clod_decimate_obj(const char* in_path, const double* ratios, size_t n_ratios,
                              const char* out_dir) {
    if (!in_path || !ratios || n_ratios == 0 || !out_dir)
        return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::vector<double> r(ratios, ratios + n_ratios);
        crowdlod::decimate_obj_file(in_path, r, out_dir);
    });
}

/* ------------------------------------------------------------------ splats */

clod_status clod_cloud_load_ply(const char* path, clod_cloud** out) {
    if (!path || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new clod_cloud{crowdlod::load_splat_ply(path)}; });
}

clod_status clod_cloud_save_ply(const clod_cloud* cloud, const char* path) {
    if (!cloud || !path) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { crowdlod::save_splat_ply(cloud->cloud, path); });
}

void clod_cloud_destroy(clod_cloud* cloud) { delete cloud; }

size_t clod_cloud_count(const clod_cloud* cloud) { return cloud ? cloud->cloud.count() : 0; }

int clod_cloud_sh_degree(const clod_cloud* cloud) { return cloud ? cloud->cloud.sh_degree : 0; }

clod_status clod_cloud_prune_opacity(const clod_cloud* cloud, double alpha_min,
                                     clod_cloud** out) {
    if (!cloud || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded(
        [&] { *out = new clod_cloud{crowdlod::prune_opacity(cloud->cloud, alpha_min)}; });
}

clod_status clod_cloud_cap_count(const clod_cloud* cloud, size_t n_max,
                                 clod_splat_importance importance, clod_cloud** out) {
    if (!cloud || !out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto mode = importance == CLOD_IMPORTANCE_OPACITY_VOLUME
                              ? crowdlod::SplatImportance::OpacityVolume
                              : crowdlod::SplatImportance::Opacity;
        *out = new clod_cloud{crowdlod::cap_count(cloud->cloud, n_max, mode)};
    });
}

uint64_t clod_splat_size_estimate(uint64_t n, int sh_degree) {
    if (sh_degree < 0 || sh_degree > 3) return 0;
    return crowdlod::estimate_splat_size(n, sh_degree);
}

clod_status clod_prune_splats(const char* in_ply, const uint64_t* caps, size_t n_caps,
                              double alpha_min, clod_splat_importance importance,
                              const char* out_dir) {
    if (!in_ply || !caps || n_caps == 0 || !out_dir)
        return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::vector<std::size_t> c(caps, caps + n_caps);
        const auto mode = importance == CLOD_IMPORTANCE_OPACITY_VOLUME
                              ? crowdlod::SplatImportance::OpacityVolume
                              : crowdlod::SplatImportance::Opacity;
        crowdlod::prune_splats_file(in_ply, c, alpha_min, mode, out_dir);
    });
}

/* ----------------------------------------------------------- nerf presets */

clod_status clod_nerf_preset_get(int lod, clod_nerf_preset* out) {
    if (!out) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null output");
    return guarded([&] {
        const crowdlod::NerfPreset p = crowdlod::nerf_preset(lod);
        *out = {p.lod,
                p.hash_levels,
                p.features_per_level,
                p.log2_hashmap_size,
                p.base_resolution,
                p.density_neurons,
                p.density_layers,
                p.sh_degree,
                p.rgb_neurons,
                p.rgb_layers};
    });
}

uint64_t clod_nerf_hash_capacity(const clod_nerf_preset* preset) {
    if (!preset) return 0;
    crowdlod::NerfPreset p;
    p.hash_levels = preset->hash_levels;
    p.log2_hashmap_size = preset->log2_hashmap_size;
    p.features_per_level = preset->features_per_level;
    return crowdlod::hash_capacity(p);
}

clod_status clod_emit_nerf_config(int lod, const char* out_path) {
    if (!out_path) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null path");
    return guarded([&] { crowdlod::emit_nerf_config_file(lod, out_path); });
}

/* -------------------------------------------------------------- scheduling */

clod_status clod_band_of(double footprint_ratio, int* band) {
    if (!band) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null output");
    return guarded([&] { *band = int(crowdlod::band_of(footprint_ratio)); });
}

clod_status clod_schedule(const char* agents_csv, const char* policy_json,
                          const char* catalog_json, const char* budget, const char* out_json,
                          int* overflow) {
    if (!agents_csv) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null agents path");
    return guarded([&] {
        const crowdlod::ScheduleResult r = crowdlod::schedule_file(
            agents_csv, policy_json ? policy_json : "", catalog_json ? catalog_json : "",
            budget ? budget : "", out_json ? out_json : "");
        if (overflow) *overflow = r.memory.overflow ? 1 : 0;
    });
}

clod_status clod_write_default_policy(const char* path) {
    if (!path) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null path");
    return guarded([&] { crowdlod::save_policy(crowdlod::default_policy(), path); });
}

clod_status clod_write_default_catalog(const char* path) {
    if (!path) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null path");
    return guarded([&] { crowdlod::save_catalog(crowdlod::default_catalog(), path); });
}

/* ------------------------------------------------------------------- stats */

clod_status clod_analyze_trials(const char* trials_csv, const char* out_dir) {
    if (!trials_csv || !out_dir) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { crowdlod::stats::analyze_trials(trials_csv, out_dir); });
}

/* ---------------------------------------------------------------- pipeline */

clod_status clod_run_pipeline(const char* config_path) {
    if (!config_path) return fail(CLOD_ERROR_INVALID_ARGUMENT, "null config path");
    return guarded([&] { crowdlod::run_pipeline(config_path); });
}

} /* extern "C" */
