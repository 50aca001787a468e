#include "gvl/sobel.hpp"

#include <algorithm>
#include <string>

#include "gvl/errors.hpp"

namespace gvl {

namespace {

// Kx[dy+1][dx+1]; Ky is its transpose.
constexpr Real kKx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};

void check_input(const Image& img, const char* what) {
  if (img.channels() != 1) {
    throw ValidationError(std::string(what) + ": expected a 1-channel image");
  }
  if (img.height() < 3 || img.width() < 3) {
    throw ValidationError(std::string(what) + ": image must be at least 3x3, got " +
                          std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
}

}  // namespace

GradientPair sobel_forward(const Image& gray) {
  check_input(gray, "sobel_forward");
  const int h = gray.height();
  const int w = gray.width();
  GradientPair out{Image(1, h, w), Image(1, h, w)};
  auto px = [&](int y, int x) { return gray.at(0, std::clamp(y, 0, h - 1), std::clamp(x, 0, w - 1)); };
  // Difference of two smoothed lines, so constant regions give exactly 0.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Real right = px(y - 1, x + 1) + 2 * px(y, x + 1) + px(y + 1, x + 1);
      const Real left = px(y - 1, x - 1) + 2 * px(y, x - 1) + px(y + 1, x - 1);
      const Real below = px(y + 1, x - 1) + 2 * px(y + 1, x) + px(y + 1, x + 1);
      const Real above = px(y - 1, x - 1) + 2 * px(y - 1, x) + px(y - 1, x + 1);
      out.gx.at(0, y, x) = right - left;
      out.gy.at(0, y, x) = below - above;
    }
  }
  return out;
}

Image sobel_backward(const GradientPair& cot) {
  check_input(cot.gx, "sobel_backward");
  require_same_shape(cot.gx, cot.gy, "sobel_backward");
  const int h = cot.gx.height();
  const int w = cot.gx.width();
  Image grad(1, h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Real cx = cot.gx.at(0, y, x);
      const Real cy = cot.gy.at(0, y, x);
      if (cx == 0 && cy == 0) continue;
      for (int dy = -1; dy <= 1; ++dy) {
        const int sy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          const int sx = std::clamp(x + dx, 0, w - 1);
          grad.at(0, sy, sx) += kKx[dy + 1][dx + 1] * cx + kKx[dx + 1][dy + 1] * cy;
        }
      }
    }
  }
  return grad;
}

}  // namespace gvl
