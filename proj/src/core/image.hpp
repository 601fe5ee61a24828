#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace crowdlod {

// Axis-aligned pixel rectangle, top-left origin, y down.
// [x0,x1) x [y0,y1), half-open.
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool valid() const { return x0 < x1 && y0 < y1; }

    bool operator==(const Rect&) const = default;
};

// 8-bit RGBA raster, row-major, straight (non-premultiplied) alpha.
class ImageRGBA {
public:
    ImageRGBA() = default;
    ImageRGBA(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return width_ == 0 || height_ == 0; }

    // Pointer to the RGBA quad at (x, y). No bounds check beyond asserts.
    std::uint8_t* pixel(int x, int y) { return data_.data() + 4 * (std::size_t(y) * width_ + x); }
    const std::uint8_t* pixel(int x, int y) const {
        return data_.data() + 4 * (std::size_t(y) * width_ + x);
    }

    void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a);

    std::span<const std::uint8_t> data() const { return data_; }
    std::span<std::uint8_t> data() { return data_; }

    bool same_size(const ImageRGBA& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }
    bool operator==(const ImageRGBA&) const = default;

    // Copies `src` into this image with src's top-left at (x, y).
    // The pasted region must lie fully inside.
    void paste(const ImageRGBA& src, int x, int y);

    // Copies out the sub-image under `r`, which must lie inside the image.
    ImageRGBA crop(const Rect& r) const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_; // 4 * width * height, RGBA
};

// Tightest rect containing every pixel with alpha > threshold, or nullopt
// when no pixel qualifies.
std::optional<Rect> alpha_bbox(const ImageRGBA& img, std::uint8_t threshold = 0);

// Coordinate-wise min/max envelope; nullopt for an empty list.
std::optional<Rect> union_rects(std::span<const Rect> rects);

// Area-weighted (box filter) resampling to out_w x out_h. Each output sample
// is the coverage-weighted mean of the source pixels under it, rounded
// half-up per channel. Exact block means for integer downscale factors.
ImageRGBA resize_area(const ImageRGBA& img, int out_w, int out_h);

// Source-over compositing onto a constant opaque background. Output alpha
// is 255 everywhere.
ImageRGBA composite_over(const ImageRGBA& img, std::uint8_t bg_r, std::uint8_t bg_g,
                         std::uint8_t bg_b);

} // namespace crowdlod
