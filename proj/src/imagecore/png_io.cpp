#include "gvl/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "gvl/errors.hpp"

namespace gvl {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void on_png_error(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

std::uint8_t quantize(Real v) {
  const double c = std::clamp(static_cast<double>(v), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

}  // namespace

Image load_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open '" + path.string() + "' for reading");

  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError("'" + path.string() + "' is not a PNG file");
  }

  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, on_png_error,
                                           on_png_warning);
  if (!png) throw IoError("libpng: cannot allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: cannot allocate info struct");
  }

  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  int channels = 0, height = 0, width = 0, depth = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("failed to decode '" + path.string() + "': " + err);
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  if (bit_depth == 16) png_set_swap(png);
  png_read_update_info(png, info);

  channels = png_get_channels(png, info);
  depth = png_get_bit_depth(png, info);
  height = static_cast<int>(png_get_image_height(png, info));
  width = static_cast<int>(png_get_image_width(png, info));

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  buffer.resize(rowbytes * height);
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = buffer.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels != 1 && channels != 3) {
    throw IoError("'" + path.string() + "': unsupported channel count " +
                  std::to_string(channels));
  }
  if (depth != 8 && depth != 16) {
    throw IoError("'" + path.string() + "': unsupported bit depth " + std::to_string(depth));
  }

  Image img(channels, height, width);
  const double maxval = depth == 16 ? 65535.0 : 255.0;
  for (int y = 0; y < height; ++y) {
    const png_byte* row = rows[y];
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c) {
        const std::size_t k = static_cast<std::size_t>(x) * channels + c;
        unsigned v;
        if (depth == 16) {
          v = static_cast<unsigned>(row[2 * k]) | (static_cast<unsigned>(row[2 * k + 1]) << 8);
        } else {
          v = row[k];
        }
        img.at(c, y, x) = static_cast<Real>(v / maxval);
      }
  }
  return img;
}

void save_png(const Image& img, const std::filesystem::path& path) {
  if (img.channels() != 1 && img.channels() != 3) {
    throw ValidationError("save_png: expected 1 or 3 channels, got " +
                          std::to_string(img.channels()));
  }
  const int channels = img.channels();
  const int height = img.height();
  const int width = img.width();
  std::vector<png_byte> buffer(static_cast<std::size_t>(height) * width * channels);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c)
        buffer[(static_cast<std::size_t>(y) * width + x) * channels + c] = quantize(img.at(c, y, x));

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot open '" + path.string() + "' for writing");

  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, on_png_error,
                                            on_png_warning);
  if (!png) throw IoError("libpng: cannot allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: cannot allocate info struct");
  }
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = buffer.data() + static_cast<std::size_t>(y) * width * channels;
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed to encode '" + path.string() + "': " + err);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  if (std::fflush(fp.get()) != 0) throw IoError("failed to flush '" + path.string() + "'");
}

}  // namespace gvl
