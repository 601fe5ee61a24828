#include "core/common.hpp"
#include "core/demo.hpp"
#include "core/impostor.hpp"
#include "core/png_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

using namespace crowdlod;

namespace {

// frame with an opaque block covering [x0,x1) x [y0,y1)
ImageRGBA block_frame(int size, Rect r, std::uint8_t gray = 200) {
    ImageRGBA img(size, size);
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) img.set_pixel(x, y, gray, gray, gray, 255);
    return img;
}

} // namespace

TEST_CASE("stabilize_frames is a no-op when content already fills the tile") {
    const int tile = 32;
    std::vector<ImageRGBA> frames = {block_frame(64, Rect{10, 10, 10 + tile, 10 + tile})};
    const StabilizedFrames s = stabilize_frames(frames, tile);
    CHECK(s.global_scale == doctest::Approx(1.0));
    CHECK(s.crop_window == Rect{10, 10, 10 + tile, 10 + tile});
    REQUIRE(s.tiles.size() == 1);
    CHECK(s.tiles[0] == frames[0].crop(s.crop_window));
}

TEST_CASE("stabilize_frames unions per-frame boxes and scales to the tile") {
    std::vector<ImageRGBA> frames = {block_frame(100, Rect{10, 10, 20, 20}),
                                     block_frame(100, Rect{5, 15, 25, 30})};
    const StabilizedFrames s = stabilize_frames(frames, 40);
    CHECK(s.crop_window == Rect{5, 10, 25, 30}); // union, max extent 20
    CHECK(s.global_scale == doctest::Approx(2.0));
    for (const ImageRGBA& t : s.tiles) {
        CHECK(t.width() == 40);
        CHECK(t.height() == 40);
    }
}

TEST_CASE("stabilize_frames error paths") {
    CHECK_THROWS_AS(stabilize_frames({}, 32), std::invalid_argument);
    std::vector<ImageRGBA> transparent = {ImageRGBA(16, 16)};
    CHECK_THROWS_AS(stabilize_frames(transparent, 32), std::invalid_argument);
    std::vector<ImageRGBA> mismatched = {block_frame(16, Rect{1, 1, 4, 4}),
                                         block_frame(17, Rect{1, 1, 4, 4})};
    CHECK_THROWS_AS(stabilize_frames(mismatched, 32), std::invalid_argument);
}

TEST_CASE("stabilized tile centers stay fixed across a swinging sequence") {
    // mirrored-limb walker: per-frame bbox width pulses but its center is
    // constant, so baked tiles must not breathe
    const std::vector<ImageRGBA> frames = demo_sprite_frames(30, 128);
    const StabilizedFrames s = stabilize_frames(frames, 96);

    double min_cx = 1e9, max_cx = -1e9, min_cy = 1e9, max_cy = -1e9;
    for (const ImageRGBA& tile : s.tiles) {
        const auto b = alpha_bbox(tile, 0);
        REQUIRE(b.has_value());
        const double cx = (b->x0 + b->x1) / 2.0;
        const double cy = (b->y0 + b->y1) / 2.0;
        min_cx = std::min(min_cx, cx);
        max_cx = std::max(max_cx, cx);
        min_cy = std::min(min_cy, cy);
        max_cy = std::max(max_cy, cy);
    }
    CHECK(max_cx - min_cx <= 1.0);
    CHECK(max_cy - min_cy <= 1.0);
}

TEST_CASE("crop window equals union of per-frame bboxes on random sprites") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ImageRGBA> frames;
        std::vector<Rect> boxes;
        const int n = 2 + int(rng() % 5);
        for (int f = 0; f < n; ++f) {
            const int x0 = int(rng() % 40), y0 = int(rng() % 40);
            const int w = 1 + int(rng() % 20), h = 1 + int(rng() % 20);
            const Rect r{x0, y0, x0 + w, y0 + h};
            frames.push_back(block_frame(64, r));
            boxes.push_back(r);
        }
        const StabilizedFrames s = stabilize_frames(frames, 32);
        CHECK(s.crop_window == *union_rects(boxes));
    }
}

TEST_CASE("opaque content never clips outside the tile") {
    const std::vector<ImageRGBA> frames = demo_sprite_frames(12, 96);
    const StabilizedFrames s = stabilize_frames(frames, 64);
    for (const ImageRGBA& tile : s.tiles) {
        const auto b = alpha_bbox(tile, 0);
        REQUIRE(b.has_value());
        CHECK(b->x0 >= 0);
        CHECK(b->y0 >= 0);
        CHECK(b->x1 <= 64);
        CHECK(b->y1 <= 64);
    }
}

TEST_CASE("pack_atlas layout is column-major") {
    std::vector<ImageRGBA> tiles(60, ImageRGBA(135, 135));
    const SpriteAtlas atlas = pack_atlas(tiles, 6, 10);
    CHECK(atlas.image.width() == 810);
    CHECK(atlas.image.height() == 1350);
    CHECK(atlas.frame_count == 60);

    SUBCASE("frame 0 lands at the origin cell") {
        const UVRect uv = tile_uv(atlas, 0);
        CHECK(uv.u0 == doctest::Approx(0.0));
        CHECK(uv.v0 == doctest::Approx(0.0));
        CHECK(uv.u1 == doctest::Approx(1.0 / 6));
        CHECK(uv.v1 == doctest::Approx(1.0 / 10));
    }
    SUBCASE("frame 12 lands at column 1, row 2") {
        const UVRect uv = tile_uv(atlas, 12);
        CHECK(uv.u0 == doctest::Approx(1.0 / 6));
        CHECK(uv.v0 == doctest::Approx(2.0 / 10));
        CHECK(uv.u1 == doctest::Approx(2.0 / 6));
        CHECK(uv.v1 == doctest::Approx(3.0 / 10));
    }
    SUBCASE("frame 59 is the last cell") {
        const UVRect uv = tile_uv(atlas, 59);
        CHECK(uv.u0 == doctest::Approx(5.0 / 6));
        CHECK(uv.v0 == doctest::Approx(9.0 / 10));
        CHECK(uv.u1 == doctest::Approx(1.0));
        CHECK(uv.v1 == doctest::Approx(1.0));
    }
}

TEST_CASE("uv cells tile the used region without overlap") {
    std::vector<ImageRGBA> tiles(23, ImageRGBA(8, 8));
    const SpriteAtlas atlas = pack_atlas(tiles, 6, 10);
    // every frame's cell must be disjoint from every other cell
    for (int f = 0; f < atlas.frame_count; ++f) {
        const UVRect a = tile_uv(atlas, f);
        CHECK(a.u0 >= 0.0);
        CHECK(a.v1 <= 1.0);
        for (int g = f + 1; g < atlas.frame_count; ++g) {
            const UVRect b = tile_uv(atlas, g);
            const bool overlap = a.u0 < b.u1 && b.u0 < a.u1 && a.v0 < b.v1 && b.v0 < a.v1;
            CHECK_FALSE(overlap);
        }
    }
}

TEST_CASE("pack_atlas rejects bad inputs") {
    std::vector<ImageRGBA> too_many(61, ImageRGBA(8, 8));
    CHECK_THROWS_AS(pack_atlas(too_many, 6, 10), std::invalid_argument);
    std::vector<ImageRGBA> uneven = {ImageRGBA(8, 8), ImageRGBA(9, 9)};
    CHECK_THROWS_AS(pack_atlas(uneven, 6, 10), std::invalid_argument);
}

TEST_CASE("pack then extract is bit-exact for all frames") {
    const std::vector<ImageRGBA> frames = demo_sprite_frames(14, 96);
    const StabilizedFrames s = stabilize_frames(frames, 48);
    const SpriteAtlas atlas = pack_atlas(s.tiles, 6, 10);
    for (int f = 0; f < int(s.tiles.size()); ++f) CHECK(extract_tile(atlas, f) == s.tiles[f]);
    CHECK_THROWS_AS(extract_tile(atlas, int(s.tiles.size())), std::out_of_range);
    CHECK_THROWS_AS(tile_uv(atlas, -1), std::out_of_range);
}

TEST_CASE("single-frame atlas extraction") {
    std::vector<ImageRGBA> one = {block_frame(32, Rect{4, 4, 20, 20})};
    const StabilizedFrames s = stabilize_frames(one, 16);
    const SpriteAtlas atlas = pack_atlas(s.tiles, 6, 10);
    CHECK(extract_tile(atlas, 0) == s.tiles[0]);
    CHECK_THROWS_AS(extract_tile(atlas, 1), std::out_of_range);
}

TEST_CASE("bake_lod_chain shares the crop window and halves cleanly") {
    const std::vector<ImageRGBA> frames = demo_sprite_frames(10, 128);
    const std::vector<int> sizes = {96, 48, 24, 12};
    const std::vector<SpriteAtlas> chain = bake_lod_chain(frames, sizes);
    REQUIRE(chain.size() == 4);

    for (std::size_t k = 0; k < chain.size(); ++k) {
        CHECK(chain[k].crop_window == chain[0].crop_window);
        CHECK(chain[k].tile_size == sizes[k]);
        CHECK(chain[k].lod_level == int(k));
        const int max_extent =
            std::max(chain[0].crop_window.width(), chain[0].crop_window.height());
        CHECK(chain[k].global_scale == doctest::Approx(double(sizes[k]) / max_extent));
    }

    // an L1 tile equals the area-downscaled L0 tile within 1 per channel
    for (int f = 0; f < chain[0].frame_count; ++f) {
        const ImageRGBA l0 = extract_tile(chain[0], f);
        const ImageRGBA l1 = extract_tile(chain[1], f);
        const ImageRGBA scaled = resize_area(l0, 48, 48);
        REQUIRE(scaled.same_size(l1));
        for (std::size_t i = 0; i < scaled.data().size(); ++i)
            CHECK(std::abs(int(scaled.data()[i]) - int(l1.data()[i])) <= 1);
    }
}

TEST_CASE("bake_lod_chain validates sizes") {
    const std::vector<ImageRGBA> frames = demo_sprite_frames(2, 64);
    CHECK_THROWS_AS(bake_lod_chain(frames, {}), std::invalid_argument);
    CHECK_THROWS_AS(bake_lod_chain(frames, {64, 64}), std::invalid_argument);
    CHECK_THROWS_AS(bake_lod_chain(frames, {32, 64}), std::invalid_argument);
}

TEST_CASE("atlas save/load round trip is bit-exact") {
    namespace fs = std::filesystem;
    const std::vector<ImageRGBA> frames = demo_sprite_frames(8, 96);
    const std::vector<SpriteAtlas> chain = bake_lod_chain(frames, {48, 24});

    const fs::path dir = fs::temp_directory_path() / "crowdlod_atlas_rt";
    fs::remove_all(dir);
    save_atlas(chain[1], dir.string(), "atlas_l1");
    const SpriteAtlas back = load_atlas((dir / "atlas_l1.json").string());
    CHECK(back.image == chain[1].image);
    CHECK(back.crop_window == chain[1].crop_window);
    CHECK(back.global_scale == doctest::Approx(chain[1].global_scale).epsilon(1e-12));
    CHECK(back.frame_count == chain[1].frame_count);
    CHECK(back.tile_size == chain[1].tile_size);
    for (int f = 0; f < back.frame_count; ++f)
        CHECK(extract_tile(back, f) == extract_tile(chain[1], f));
    fs::remove_all(dir);
}

TEST_CASE("bake workflow writes one atlas per size") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "crowdlod_bake_dir";
    fs::remove_all(base);
    fs::create_directories(base / "frames");
    const std::vector<ImageRGBA> frames = demo_sprite_frames(6, 64);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu.png", i);
        save_png(frames[i], (base / "frames" / name).string());
    }
    bake_impostor_dir((base / "frames").string(), {32, 16}, 6, 10, (base / "out").string());
    CHECK(fs::exists(base / "out" / "atlas_l0.png"));
    CHECK(fs::exists(base / "out" / "atlas_l0.json"));
    CHECK(fs::exists(base / "out" / "atlas_l1.png"));
    const SpriteAtlas atlas = load_atlas((base / "out" / "atlas_l0.json").string());
    CHECK(atlas.frame_count == 6);
    CHECK(atlas.tile_size == 32);
    fs::remove_all(base);
}
