/*
 * crowdlod — representation-aware crowd LoD toolkit.
 *
 * C interface to the shared library. All objects are opaque handles owned by
 * the library; every *_destroy is safe on NULL. Functions returning
 * clod_status report CLOD_OK on success; on failure clod_last_error() holds
 * a thread-local diagnostic for the failing call.
 */

#ifndef CROWDLOD_H
#define CROWDLOD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clod_status {
    CLOD_OK = 0,
    CLOD_ERROR_INVALID_ARGUMENT = 1, /* contract violation (bad inputs, ranges) */
    CLOD_ERROR_IO = 2,               /* missing/corrupt files, write failures */
    CLOD_ERROR_NUMERIC = 3,          /* divergence, separation, stalls */
    CLOD_ERROR_UNKNOWN = 4
} clod_status;

const char* clod_version(void);
const char* clod_last_error(void); /* message for this thread's last failure */

/* ------------------------------------------------------------------ images */

typedef struct clod_image clod_image;

clod_status clod_image_create(int width, int height, clod_image** out);
clod_status clod_image_load_png(const char* path, clod_image** out);
clod_status clod_image_save_png(const clod_image* img, const char* path);
void clod_image_destroy(clod_image* img);

int clod_image_width(const clod_image* img);
int clod_image_height(const clod_image* img);
/* row-major RGBA, 4 * width * height bytes */
const uint8_t* clod_image_pixels(const clod_image* img);
clod_status clod_image_set_pixel(clod_image* img, int x, int y, uint8_t r, uint8_t g, uint8_t b,
                                 uint8_t a);

/* bbox = {x0, y0, x1, y1}, half open; *has_content=0 when nothing exceeds
 * the threshold */
clod_status clod_image_alpha_bbox(const clod_image* img, uint8_t threshold, int32_t bbox[4],
                                  int* has_content);
clod_status clod_image_resize_area(const clod_image* img, int out_w, int out_h, clod_image** out);
clod_status clod_image_composite_over(const clod_image* img, uint8_t bg_r, uint8_t bg_g,
                                      uint8_t bg_b, clod_image** out);

/* ----------------------------------------------------------------- metrics */

/* *identical = 1 and *psnr_db untouched when the images match exactly */
clod_status clod_psnr(const clod_image* a, const clod_image* b, double* psnr_db, int* identical);
clod_status clod_ssim(const clod_image* a, const clod_image* b, double* ssim);

/* Scores candidate frames against reference frames (numbered PNGs, paired in
 * order). lpips_csv may be NULL. Writes <out_prefix>.txt/.csv when out_prefix
 * is non-NULL. */
clod_status clod_compare_sequences(const char* candidate_dir, const char* reference_dir,
                                   const char* lpips_csv, const char* out_prefix);

/* --------------------------------------------------------------- impostors */

typedef struct clod_atlas clod_atlas;

/* Bakes stabilized sprite atlases, one per tile size (strictly decreasing),
 * into out_dir as atlas_l<k>.png + atlas_l<k>.json. */
clod_status clod_bake_impostor(const char* frames_dir, const int* tile_sizes, size_t n_sizes,
                               int cols, int rows, const char* out_dir);

clod_status clod_atlas_load(const char* sidecar_json, clod_atlas** out);
void clod_atlas_destroy(clod_atlas* atlas);
int clod_atlas_frame_count(const clod_atlas* atlas);
int clod_atlas_tile_size(const clod_atlas* atlas);
/* uv = {u0, v0, u1, v1}; v measured from the top of the atlas image */
clod_status clod_atlas_tile_uv(const clod_atlas* atlas, int frame_index, double uv[4]);
clod_status clod_atlas_extract_tile(const clod_atlas* atlas, int frame_index, clod_image** out);

/* ------------------------------------------------------------------ meshes */

typedef struct clod_mesh clod_mesh;

clod_status clod_mesh_load_obj(const char* path, clod_mesh** out);
clod_status clod_mesh_save_obj(const clod_mesh* mesh, const char* path);
void clod_mesh_destroy(clod_mesh* mesh);
size_t clod_mesh_vertex_count(const clod_mesh* mesh);
size_t clod_mesh_face_count(const clod_mesh* mesh);
clod_status clod_mesh_stats(const clod_mesh* mesh, size_t* vertices, size_t* faces,
                            size_t* boundary_edges, size_t* non_manifold_edges);
clod_status clod_mesh_decimate(const clod_mesh* mesh, double ratio, clod_mesh** out);

/* Decimates an OBJ at each ratio, writing <out_dir>/lod<k>.obj. */
clod_status clod_decimate_obj(const char* in_path, const double* ratios, size_t n_ratios,
                              const char* out_dir);

/* ------------------------------------------------------------------ splats */

typedef struct clod_cloud clod_cloud;

typedef enum clod_splat_importance {
    CLOD_IMPORTANCE_OPACITY = 0,
    CLOD_IMPORTANCE_OPACITY_VOLUME = 1
} clod_splat_importance;

clod_status clod_cloud_load_ply(const char* path, clod_cloud** out);
clod_status clod_cloud_save_ply(const clod_cloud* cloud, const char* path);
void clod_cloud_destroy(clod_cloud* cloud);
size_t clod_cloud_count(const clod_cloud* cloud);
int clod_cloud_sh_degree(const clod_cloud* cloud);
clod_status clod_cloud_prune_opacity(const clod_cloud* cloud, double alpha_min, clod_cloud** out);
clod_status clod_cloud_cap_count(const clod_cloud* cloud, size_t n_max,
                                 clod_splat_importance importance, clod_cloud** out);
uint64_t clod_splat_size_estimate(uint64_t n, int sh_degree);

/* Full reduction chain: <out_dir>/splats_l<k>.ply per cap. */
clod_status clod_prune_splats(const char* in_ply, const uint64_t* caps, size_t n_caps,
                              double alpha_min, clod_splat_importance importance,
                              const char* out_dir);

/* ----------------------------------------------------------- nerf presets */

typedef struct clod_nerf_preset {
    int lod;
    int hash_levels;
    int features_per_level;
    int log2_hashmap_size;
    int base_resolution;
    int density_neurons;
    int density_layers;
    int sh_degree;
    int rgb_neurons;
    int rgb_layers;
} clod_nerf_preset;

clod_status clod_nerf_preset_get(int lod, clod_nerf_preset* out);
uint64_t clod_nerf_hash_capacity(const clod_nerf_preset* preset);
clod_status clod_emit_nerf_config(int lod, const char* out_path);

/* -------------------------------------------------------------- scheduling */

typedef enum clod_representation {
    CLOD_REP_MESH = 0,
    CLOD_REP_IMPOSTOR = 1,
    CLOD_REP_GAUSSIAN = 2,
    CLOD_REP_NERF = 3
} clod_representation;

/* footprint ratio -> distance band 0..4 */
clod_status clod_band_of(double footprint_ratio, int* band);

/* Schedules agents from a CSV (id,footprint_ratio). policy_json/catalog_json
 * may be NULL for the built-in defaults; budget may be NULL or "unlimited".
 * Writes assignments + memory report to out_json; *overflow reports whether
 * the budget could not be met. */
clod_status clod_schedule(const char* agents_csv, const char* policy_json,
                          const char* catalog_json, const char* budget, const char* out_json,
                          int* overflow);

/* Writes the built-in default policy/catalog documents. */
clod_status clod_write_default_policy(const char* path);
clod_status clod_write_default_catalog(const char* path);

/* ------------------------------------------------------------------- stats */

/* Full study analysis: reads a trials CSV (subject,mode,distance,lod,chosen,
 * repetition) and writes proportions.csv, anova.csv/.txt and
 * lr_tests.csv/.txt under out_dir. */
clod_status clod_analyze_trials(const char* trials_csv, const char* out_dir);

/* ---------------------------------------------------------------- pipeline */

/* Runs every generator named in the JSON config; writes
 * <output_dir>/manifest.json. */
clod_status clod_run_pipeline(const char* config_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CROWDLOD_H */
