#pragma once

#include "core/image.hpp"

#include <string>
#include <vector>

namespace crowdlod {

// Loads an 8-bit PNG. Grayscale, palette and RGB files are promoted to RGBA
// (missing alpha = 255); 16-bit channels are reduced to 8. Throws IoError.
ImageRGBA load_png(const std::string& path);

// Writes 8-bit RGBA, non-interlaced, no ancillary chunks. Output is
// byte-identical across runs for identical pixels. Throws IoError.
void save_png(const ImageRGBA& img, const std::string& path);

// PNG files in a directory ordered as an animation: by the last run of
// digits in the stem, then by name. Throws IoError on a missing directory.
std::vector<std::string> list_frame_pngs(const std::string& dir);

} // namespace crowdlod
