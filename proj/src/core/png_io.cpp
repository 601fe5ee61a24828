#include "core/png_io.hpp"

#include "core/common.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

namespace crowdlod {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void png_warning_sink(png_structp, png_const_charp) {}

} // namespace

ImageRGBA load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open for reading: " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_sink);
    if (!png) throw IoError("png: read struct allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png: info struct allocation failed");
    }

    // Locals live outside the setjmp region so unwinding after the jump
    // destroys them normally.
    ImageRGBA img;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png: failed to read " + path);
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_expand(png);      // palette/low-depth gray -> 8 bit, tRNS -> alpha
    png_set_strip_16(png);    // 16 -> 8
    png_set_gray_to_rgb(png); // gray -> rgb
    png_set_filler(png, 0xFF, PNG_FILLER_AFTER); // add opaque alpha when absent
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    if (png_get_channels(png, info) != 4 || png_get_bit_depth(png, info) != 8)
        png_error(png, "unsupported layout after expansion");

    img = ImageRGBA(int(w), int(h));
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = img.pixel(0, int(y));
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const ImageRGBA& img, const std::string& path) {
    if (img.empty()) throw IoError("refusing to write empty image: " + path);
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open for writing: " + path);

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_sink);
    if (!png) throw IoError("png: write struct allocation failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png: info struct allocation failed");
    }

    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png: failed to write " + path);
    }

    png_init_io(png, fp.get());
    png_set_compression_level(png, 4);
    png_set_IHDR(png, info, png_uint_32(img.width()), png_uint_32(img.height()), 8,
                 PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    rows.resize(img.height());
    for (int y = 0; y < img.height(); ++y) rows[y] = const_cast<png_bytep>(img.pixel(0, y));
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<std::string> list_frame_pngs(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<std::pair<long, std::string>> entries;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext != ".png") continue;
        const std::string stem = e.path().stem().string();
        long num = -1;
        for (std::size_t i = 0; i < stem.size();) {
            if (std::isdigit(static_cast<unsigned char>(stem[i]))) {
                std::size_t j = i;
                while (j < stem.size() && std::isdigit(static_cast<unsigned char>(stem[j]))) ++j;
                num = std::stol(stem.substr(i, j - i));
                i = j;
            } else {
                ++i;
            }
        }
        entries.emplace_back(num, e.path().string());
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return fs::path(a.second).filename().string() < fs::path(b.second).filename().string();
    });
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (auto& [num, p] : entries) out.push_back(std::move(p));
    return out;
}

} // namespace crowdlod
