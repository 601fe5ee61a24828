#include "core/impostor.hpp"

#include "core/common.hpp"
#include "core/png_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace crowdlod {

namespace {

int round_half_up(double v) { return int(std::floor(v + 0.5)); }

} // namespace

StabilizedFrames stabilize_frames(const std::vector<ImageRGBA>& frames, int tile_size,
                                  std::uint8_t alpha_threshold) {
    if (frames.empty()) throw std::invalid_argument("stabilize_frames: empty frame list");
    if (tile_size < 1) throw std::invalid_argument("stabilize_frames: tile_size must be >= 1");
    for (const ImageRGBA& f : frames)
        if (!f.same_size(frames.front()))
            throw std::invalid_argument("stabilize_frames: mismatched frame dimensions");

    std::vector<Rect> boxes;
    boxes.reserve(frames.size());
    for (const ImageRGBA& f : frames) {
        if (auto b = alpha_bbox(f, alpha_threshold)) boxes.push_back(*b);
    }
    const std::optional<Rect> window = union_rects(boxes);
    if (!window) throw std::invalid_argument("stabilize_frames: fully transparent sequence");

    const int cw = window->width();
    const int ch = window->height();
    const double scale = double(tile_size) / double(std::max(cw, ch));
    const int scaled_w = std::max(1, round_half_up(cw * scale));
    const int scaled_h = std::max(1, round_half_up(ch * scale));
    const int off_x = (tile_size - scaled_w) / 2; // odd remainder biases top-left
    const int off_y = (tile_size - scaled_h) / 2;

    StabilizedFrames out;
    out.crop_window = *window;
    out.global_scale = scale;
    out.tiles.resize(frames.size());
    parallel_for(frames.size(), [&](std::size_t i) {
        const ImageRGBA content = resize_area(frames[i].crop(*window), scaled_w, scaled_h);
        ImageRGBA tile(tile_size, tile_size);
        tile.paste(content, off_x, off_y);
        out.tiles[i] = std::move(tile);
    });
    return out;
}

SpriteAtlas pack_atlas(const std::vector<ImageRGBA>& tiles, int cols, int rows) {
    if (cols < 1 || rows < 1) throw std::invalid_argument("pack_atlas: grid must be >= 1x1");
    if (tiles.empty()) throw std::invalid_argument("pack_atlas: no tiles");
    if (int(tiles.size()) > cols * rows)
        throw std::invalid_argument("pack_atlas: too many tiles for grid");
    const int t = tiles.front().width();
    for (const ImageRGBA& tile : tiles)
        if (tile.width() != t || tile.height() != t)
            throw std::invalid_argument("pack_atlas: tiles must be square and uniform");

    SpriteAtlas atlas;
    atlas.cols = cols;
    atlas.rows = rows;
    atlas.tile_size = t;
    atlas.frame_count = int(tiles.size());
    atlas.image = ImageRGBA(cols * t, rows * t);
    for (int f = 0; f < int(tiles.size()); ++f) {
        const int col = f / rows; // column-major
        const int row = f % rows;
        atlas.image.paste(tiles[f], col * t, row * t);
    }
    return atlas;
}

UVRect tile_uv(const SpriteAtlas& atlas, int frame_index) {
    if (frame_index < 0 || frame_index >= atlas.frame_count)
        throw std::out_of_range("tile_uv: frame index out of range");
    const int col = frame_index / atlas.rows;
    const int row = frame_index % atlas.rows;
    return UVRect{double(col) / atlas.cols, double(row) / atlas.rows,
                  double(col + 1) / atlas.cols, double(row + 1) / atlas.rows};
}

ImageRGBA extract_tile(const SpriteAtlas& atlas, int frame_index) {
    if (frame_index < 0 || frame_index >= atlas.frame_count)
        throw std::out_of_range("extract_tile: frame index out of range");
    const int col = frame_index / atlas.rows;
    const int row = frame_index % atlas.rows;
    const int t = atlas.tile_size;
    return atlas.image.crop(Rect{col * t, row * t, (col + 1) * t, (row + 1) * t});
}

std::vector<SpriteAtlas> bake_lod_chain(const std::vector<ImageRGBA>& frames,
                                        const std::vector<int>& tile_sizes, int cols, int rows,
                                        std::uint8_t alpha_threshold) {
    if (tile_sizes.empty()) throw std::invalid_argument("bake_lod_chain: no tile sizes");
    for (std::size_t i = 1; i < tile_sizes.size(); ++i)
        if (tile_sizes[i] >= tile_sizes[i - 1])
            throw std::invalid_argument("bake_lod_chain: tile sizes must be strictly decreasing");

    StabilizedFrames base = stabilize_frames(frames, tile_sizes.front(), alpha_threshold);
    const int max_extent = std::max(base.crop_window.width(), base.crop_window.height());

    std::vector<SpriteAtlas> chain;
    chain.reserve(tile_sizes.size());
    for (std::size_t level = 0; level < tile_sizes.size(); ++level) {
        const int size = tile_sizes[level];
        std::vector<ImageRGBA> tiles(base.tiles.size());
        if (level == 0) {
            tiles = base.tiles;
        } else {
            parallel_for(base.tiles.size(), [&](std::size_t i) {
                tiles[i] = resize_area(base.tiles[i], size, size);
            });
        }
        SpriteAtlas atlas = pack_atlas(tiles, cols, rows);
        atlas.crop_window = base.crop_window;
        atlas.global_scale = double(size) / double(max_extent);
        atlas.lod_level = int(level);
        chain.push_back(std::move(atlas));
    }
    return chain;
}

void save_atlas(const SpriteAtlas& atlas, const std::string& dir, const std::string& stem) {
    fs::create_directories(dir);
    const fs::path png_path = fs::path(dir) / (stem + ".png");
    const fs::path json_path = fs::path(dir) / (stem + ".json");
    save_png(atlas.image, png_path.string());

    ordered_json meta;
    meta["image"] = stem + ".png";
    meta["cols"] = atlas.cols;
    meta["rows"] = atlas.rows;
    meta["tile_size"] = atlas.tile_size;
    meta["frame_count"] = atlas.frame_count;
    meta["crop_window"] = {{"x0", atlas.crop_window.x0},
                           {"y0", atlas.crop_window.y0},
                           {"x1", atlas.crop_window.x1},
                           {"y1", atlas.crop_window.y1}};
    meta["global_scale"] = atlas.global_scale;
    meta["lod_level"] = atlas.lod_level;

    std::ofstream out(json_path);
    if (!out) throw IoError("cannot write " + json_path.string());
    out << meta.dump(2) << '\n';
}

SpriteAtlas load_atlas(const std::string& sidecar_path) {
    std::ifstream in(sidecar_path);
    if (!in) throw IoError("cannot open atlas sidecar: " + sidecar_path);
    ordered_json meta;
    try {
        in >> meta;
    } catch (const std::exception& e) {
        throw IoError("bad atlas sidecar " + sidecar_path + ": " + e.what());
    }

    SpriteAtlas atlas;
    try {
        atlas.cols = meta.at("cols").get<int>();
        atlas.rows = meta.at("rows").get<int>();
        atlas.tile_size = meta.at("tile_size").get<int>();
        atlas.frame_count = meta.at("frame_count").get<int>();
        const auto& cw = meta.at("crop_window");
        atlas.crop_window = Rect{cw.at("x0").get<int>(), cw.at("y0").get<int>(),
                                 cw.at("x1").get<int>(), cw.at("y1").get<int>()};
        atlas.global_scale = meta.at("global_scale").get<double>();
        atlas.lod_level = meta.at("lod_level").get<int>();
        const fs::path img = fs::path(sidecar_path).parent_path() /
                             meta.at("image").get<std::string>();
        atlas.image = load_png(img.string());
    } catch (const ordered_json::exception& e) {
        throw IoError("bad atlas sidecar " + sidecar_path + ": " + e.what());
    }
    if (atlas.image.width() != atlas.cols * atlas.tile_size ||
        atlas.image.height() != atlas.rows * atlas.tile_size)
        throw IoError("atlas image does not match sidecar layout: " + sidecar_path);
    return atlas;
}

void bake_impostor_dir(const std::string& frames_dir, const std::vector<int>& tile_sizes,
                       int cols, int rows, const std::string& out_dir) {
    const std::vector<std::string> files = list_frame_pngs(frames_dir);
    if (files.empty()) throw IoError("no PNG frames in " + frames_dir);
    std::vector<ImageRGBA> frames(files.size());
    parallel_for(files.size(), [&](std::size_t i) { frames[i] = load_png(files[i]); });

    const std::vector<SpriteAtlas> chain = bake_lod_chain(frames, tile_sizes, cols, rows);
    for (const SpriteAtlas& atlas : chain)
        save_atlas(atlas, out_dir, "atlas_l" + std::to_string(atlas.lod_level));
}

} // namespace crowdlod
