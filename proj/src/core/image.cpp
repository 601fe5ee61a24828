#include "core/image.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace crowdlod {

ImageRGBA::ImageRGBA(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
    data_.assign(4 * std::size_t(width) * std::size_t(height), 0);
}

void ImageRGBA::set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b,
                          std::uint8_t a) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_);
    std::uint8_t* p = pixel(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
    p[3] = a;
}

void ImageRGBA::paste(const ImageRGBA& src, int x, int y) {
    if (x < 0 || y < 0 || x + src.width() > width_ || y + src.height() > height_)
        throw std::invalid_argument("paste region outside image");
    for (int row = 0; row < src.height(); ++row) {
        std::memcpy(pixel(x, y + row), src.pixel(0, row), 4 * std::size_t(src.width()));
    }
}

ImageRGBA ImageRGBA::crop(const Rect& r) const {
    if (!r.valid() || r.x0 < 0 || r.y0 < 0 || r.x1 > width_ || r.y1 > height_)
        throw std::invalid_argument("crop rect outside image");
    ImageRGBA out(r.width(), r.height());
    for (int row = 0; row < r.height(); ++row) {
        std::memcpy(out.pixel(0, row), pixel(r.x0, r.y0 + row), 4 * std::size_t(r.width()));
    }
    return out;
}

std::optional<Rect> alpha_bbox(const ImageRGBA& img, std::uint8_t threshold) {
    int x0 = img.width(), y0 = img.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < img.height(); ++y) {
        const std::uint8_t* row = img.pixel(0, y);
        for (int x = 0; x < img.width(); ++x) {
            if (row[4 * x + 3] > threshold) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
        }
    }
    if (x1 < 0) return std::nullopt;
    return Rect{x0, y0, x1 + 1, y1 + 1};
}

std::optional<Rect> union_rects(std::span<const Rect> rects) {
    if (rects.empty()) return std::nullopt;
    Rect u = rects.front();
    for (const Rect& r : rects.subspan(1)) {
        u.x0 = std::min(u.x0, r.x0);
        u.y0 = std::min(u.y0, r.y0);
        u.x1 = std::max(u.x1, r.x1);
        u.y1 = std::max(u.y1, r.y1);
    }
    return u;
}

ImageRGBA resize_area(const ImageRGBA& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw std::invalid_argument("target dimensions must be >= 1");
    if (out_w == img.width() && out_h == img.height()) return img;

    const double sx = double(img.width()) / out_w;
    const double sy = double(img.height()) / out_h;
    ImageRGBA out(out_w, out_h);

    for (int oy = 0; oy < out_h; ++oy) {
        const double fy0 = oy * sy;
        const double fy1 = (oy + 1) * sy;
        const int iy0 = int(std::floor(fy0));
        const int iy1 = std::min(int(std::ceil(fy1)), img.height());
        for (int ox = 0; ox < out_w; ++ox) {
            const double fx0 = ox * sx;
            const double fx1 = (ox + 1) * sx;
            const int ix0 = int(std::floor(fx0));
            const int ix1 = std::min(int(std::ceil(fx1)), img.width());

            double acc[4] = {0, 0, 0, 0};
            double area = 0;
            for (int iy = iy0; iy < iy1; ++iy) {
                const double wy = std::min(fy1, double(iy + 1)) - std::max(fy0, double(iy));
                if (wy <= 0) continue;
                const std::uint8_t* row = img.pixel(0, iy);
                for (int ix = ix0; ix < ix1; ++ix) {
                    const double wx = std::min(fx1, double(ix + 1)) - std::max(fx0, double(ix));
                    if (wx <= 0) continue;
                    const double w = wx * wy;
                    const std::uint8_t* p = row + 4 * ix;
                    acc[0] += w * p[0];
                    acc[1] += w * p[1];
                    acc[2] += w * p[2];
                    acc[3] += w * p[3];
                    area += w;
                }
            }
            std::uint8_t* q = out.pixel(ox, oy);
            for (int c = 0; c < 4; ++c) {
                const double mean = acc[c] / area;
                q[c] = static_cast<std::uint8_t>(std::clamp(std::floor(mean + 0.5), 0.0, 255.0));
            }
        }
    }
    return out;
}

ImageRGBA composite_over(const ImageRGBA& img, std::uint8_t bg_r, std::uint8_t bg_g,
                         std::uint8_t bg_b) {
    ImageRGBA out(img.width(), img.height());
    const int bg[3] = {bg_r, bg_g, bg_b};
    const std::uint8_t* src = img.data().data();
    std::uint8_t* dst = out.data().data();
    const std::size_t n = std::size_t(img.width()) * img.height();
    for (std::size_t i = 0; i < n; ++i, src += 4, dst += 4) {
        const int a = src[3];
        for (int c = 0; c < 3; ++c) {
            const int v = src[c] * a + bg[c] * (255 - a);
            dst[c] = static_cast<std::uint8_t>((2 * v + 255) / (2 * 255)); // round half up
        }
        dst[3] = 255;
    }
    return out;
}

} // namespace crowdlod
