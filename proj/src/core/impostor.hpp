#pragma once

#include "core/image.hpp"

#include <string>
#include <vector>

namespace crowdlod {

// Normalized texture coordinates of one atlas cell. v is measured from the
// top of the atlas image; renderers with a bottom-left v origin must flip at
// the boundary.
struct UVRect {
    double u0 = 0, v0 = 0, u1 = 0, v1 = 0;
};

// Column-major sprite sheet plus the stabilization metadata shared by all
// frames of one LoD.
struct SpriteAtlas {
    ImageRGBA image;
    int cols = 6;
    int rows = 10;
    int tile_size = 0;   // square tiles
    int frame_count = 0; // <= cols * rows
    Rect crop_window;    // union alpha bbox in source-frame coordinates
    double global_scale = 1.0; // tile_size / max crop extent
    int lod_level = 0;
};

struct StabilizedFrames {
    std::vector<ImageRGBA> tiles; // tile_size x tile_size each
    Rect crop_window;
    double global_scale = 1.0;
};

// Crops every frame to the union alpha bounding box of the sequence, applies
// one global scale (tile_size / max crop extent, unclamped) and centers the
// result on a square transparent canvas. Odd margins bias toward top-left.
StabilizedFrames stabilize_frames(const std::vector<ImageRGBA>& frames, int tile_size,
                                  std::uint8_t alpha_threshold = 0);

// Packs equal-size square tiles column-major: frame f occupies column
// floor(f / rows), row f % rows. Unused cells stay transparent black.
SpriteAtlas pack_atlas(const std::vector<ImageRGBA>& tiles, int cols, int rows);

// Cell UVs for one frame. u spans [col/cols,(col+1)/cols], v from the top.
UVRect tile_uv(const SpriteAtlas& atlas, int frame_index);

// Bit-exact copy of a stored tile.
ImageRGBA extract_tile(const SpriteAtlas& atlas, int frame_index);

// Bakes one atlas per tile size (strictly decreasing). The union crop window
// is computed once at source resolution; the base level is stabilized from
// the source frames and each lower level is an exact area downscale of the
// base tiles, so framing is identical across the chain.
std::vector<SpriteAtlas> bake_lod_chain(const std::vector<ImageRGBA>& frames,
                                        const std::vector<int>& tile_sizes, int cols = 6,
                                        int rows = 10, std::uint8_t alpha_threshold = 0);

// Writes <dir>/<stem>.png plus a <dir>/<stem>.json sidecar (layout, crop
// window, scale, frame count). load_atlas reads the sidecar and the image it
// references; the round trip is bit-exact.
void save_atlas(const SpriteAtlas& atlas, const std::string& dir, const std::string& stem);
SpriteAtlas load_atlas(const std::string& sidecar_path);

// Full bake workflow: numbered PNG frames from frames_dir, one atlas per
// size written to out_dir as atlas_l<k>.png / atlas_l<k>.json.
void bake_impostor_dir(const std::string& frames_dir, const std::vector<int>& tile_sizes,
                       int cols, int rows, const std::string& out_dir);

} // namespace crowdlod
