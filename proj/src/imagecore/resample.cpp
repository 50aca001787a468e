#include "gvl/resample.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gvl/errors.hpp"

namespace gvl {

namespace {

constexpr Real kCubicA = Real(-0.5);

struct Taps {
  std::array<int, 4> index;
  std::array<Real, 4> weight;
};

// One set of 4 taps per output coordinate along an axis of length `in`.
std::vector<Taps> axis_taps(int in, int out) {
  std::vector<Taps> taps(out);
  const double ratio = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    const double src = (i + 0.5) * ratio - 0.5;
    const double base = std::floor(src);
    const double t = src - base;
    for (int k = 0; k < 4; ++k) {
      const int idx = static_cast<int>(base) - 1 + k;
      taps[i].index[k] = std::clamp(idx, 0, in - 1);
      taps[i].weight[k] = cubic_kernel(static_cast<Real>(t - (k - 1)));
    }
  }
  return taps;
}

}  // namespace

Image to_grayscale(const Image& img) {
  if (img.channels() == 1) return img;
  if (img.channels() != 3) {
    throw ValidationError("to_grayscale: expected 1 or 3 channels, got " +
                          std::to_string(img.channels()));
  }
  Image out(1, img.height(), img.width());
  auto r = img.plane(0);
  auto g = img.plane(1);
  auto b = img.plane(2);
  auto y = out.plane(0);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = kLumaR * r[i] + kLumaG * g[i] + kLumaB * b[i];
  return out;
}

Image grayscale_backward(const Image& gray_cot, int channels) {
  if (gray_cot.channels() != 1) throw ValidationError("grayscale_backward: expected 1 channel");
  if (channels == 1) return gray_cot;
  if (channels != 3) throw ValidationError("grayscale_backward: channels must be 1 or 3");
  Image out(3, gray_cot.height(), gray_cot.width());
  const std::array<Real, 3> w{kLumaR, kLumaG, kLumaB};
  auto src = gray_cot.plane(0);
  for (int c = 0; c < 3; ++c) {
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = w[c] * src[i];
  }
  return out;
}

Real cubic_kernel(Real x) {
  const Real a = kCubicA;
  x = std::abs(x);
  if (x <= 1) return ((a + 2) * x - (a + 3)) * x * x + 1;
  if (x < 2) return ((a * x - 5 * a) * x + 8 * a) * x - 4 * a;
  return 0;
}

Image bicubic_resize(const Image& img, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1) {
    throw ValidationError("bicubic_resize: target dimensions must be >= 1");
  }
  const auto tx = axis_taps(img.width(), out_width);
  const auto ty = axis_taps(img.height(), out_height);

  // Horizontal pass then vertical pass.
  Image tmp(img.channels(), img.height(), out_width);
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < out_width; ++x) {
        Real acc = 0;
        for (int k = 0; k < 4; ++k) acc += tx[x].weight[k] * img.at(c, y, tx[x].index[k]);
        tmp.at(c, y, x) = acc;
      }

  Image out(img.channels(), out_height, out_width);
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < out_height; ++y)
      for (int x = 0; x < out_width; ++x) {
        Real acc = 0;
        for (int k = 0; k < 4; ++k) acc += ty[y].weight[k] * tmp.at(c, ty[y].index[k], x);
        out.at(c, y, x) = acc;
      }
  return out;
}

Image center_crop(const Image& img, int height, int width) {
  if (height > img.height() || width > img.width()) {
    throw ValidationError("center_crop: target " + std::to_string(height) + "x" +
                          std::to_string(width) + " exceeds image " +
                          std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  return crop(img, (img.height() - height) / 2, (img.width() - width) / 2, height, width);
}

Image center_crop_to_multiple(const Image& img, int multiple) {
  if (multiple < 1) throw ValidationError("center_crop_to_multiple: multiple must be >= 1");
  const int h = img.height() / multiple * multiple;
  const int w = img.width() / multiple * multiple;
  if (h < multiple || w < multiple) {
    throw ValidationError("image " + std::to_string(img.height()) + "x" +
                          std::to_string(img.width()) + " is smaller than " +
                          std::to_string(multiple));
  }
  return center_crop(img, h, w);
}

Image make_lr(const Image& hr, int scale) {
  if (scale < 2) throw ValidationError("make_lr: scale factor must be >= 2");
  const Image cropped = center_crop_to_multiple(hr, scale);
  return bicubic_resize(cropped, cropped.height() / scale, cropped.width() / scale);
}

Image crop_border(const Image& img, int px) {
  if (px < 0 || 2 * px >= std::min(img.height(), img.width())) {
    throw ValidationError("crop_border: " + std::to_string(px) + " px exceeds image " +
                          std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  if (px == 0) return img;
  return crop(img, px, px, img.height() - 2 * px, img.width() - 2 * px);
}

}  // namespace gvl
