#pragma once

#include <filesystem>

#include "gvl/image.hpp"

namespace gvl {

/// Reads an 8- or 16-bit gray/RGB PNG (alpha dropped, palettes expanded).
/// Samples are divided by the bit-depth maximum.
Image load_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG. Samples are clamped to [0,1] and quantized with
/// floor(x * 255 + 0.5). Output bytes depend only on the pixel data.
void save_png(const Image& img, const std::filesystem::path& path);

}  // namespace gvl
