#include "gvl/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gvl/errors.hpp"

namespace gvl {

namespace {

void check_dims(int channels, int height, int width) {
  if (channels < 1 || height < 1 || width < 1) {
    throw ValidationError("image dimensions must be positive, got " + std::to_string(channels) +
                          "x" + std::to_string(height) + "x" + std::to_string(width));
  }
}

}  // namespace

Image::Image(int channels, int height, int width, Real fill)
    : channels_(channels), height_(height), width_(width) {
  check_dims(channels, height, width);
  data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

Image::Image(int channels, int height, int width, std::vector<Real> data)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
  check_dims(channels, height, width);
  if (data_.size() != static_cast<std::size_t>(channels) * height * width) {
    throw ValidationError("image data length does not match c*h*w");
  }
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ValidationError(std::string(what) + ": shape mismatch (" +
                          std::to_string(a.channels()) + "x" + std::to_string(a.height()) + "x" +
                          std::to_string(a.width()) + " vs " + std::to_string(b.channels()) + "x" +
                          std::to_string(b.height()) + "x" + std::to_string(b.width()) + ")");
  }
}

void require_finite(const Image& img, const char* what) {
  for (Real v : img.data()) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite sample");
  }
}

Image operator+(const Image& a, const Image& b) {
  Image out = a;
  out += b;
  return out;
}

Image operator-(const Image& a, const Image& b) {
  require_same_shape(a, b, "subtract");
  Image out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

Image operator*(Real s, const Image& a) {
  Image out = a;
  for (Real& v : out.data()) v *= s;
  return out;
}

Image& operator+=(Image& a, const Image& b) {
  require_same_shape(a, b, "add");
  auto o = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bd[i];
  return a;
}

Image shifted(const Image& a, Real offset) {
  Image out = a;
  for (Real& v : out.data()) v += offset;
  return out;
}

Image clamped(const Image& a, Real lo, Real hi) {
  Image out = a;
  for (Real& v : out.data()) v = std::clamp(v, lo, hi);
  return out;
}

Image crop(const Image& img, int y0, int x0, int height, int width) {
  if (y0 < 0 || x0 < 0 || height < 1 || width < 1 || y0 + height > img.height() ||
      x0 + width > img.width()) {
    throw ValidationError("crop window exceeds image bounds");
  }
  Image out(img.channels(), height, width);
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) out.at(c, y, x) = img.at(c, y0 + y, x0 + x);
  return out;
}

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  double acc = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) acc += static_cast<double>(ad[i]) * bd[i];
  return acc;
}

}  // namespace gvl
