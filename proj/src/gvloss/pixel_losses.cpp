#include <string>

#include "gvl/errors.hpp"
#include "gvl/losses.hpp"

namespace gvl {

LossResult l2_loss(const Image& sr, const Image& hr) {
  require_same_shape(sr, hr, "l2_loss");
  const auto a = sr.data();
  const auto b = hr.data();
  const Real count = static_cast<Real>(a.size());
  LossResult out{0, Image(sr.channels(), sr.height(), sr.width())};
  auto g = out.grad_sr.data();
  Real ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Real d = a[i] - b[i];
    ss += d * d;
    g[i] = 2 * d / count;
  }
  out.value = ss / count;
  return out;
}

LossResult l1_loss(const Image& sr, const Image& hr) {
  require_same_shape(sr, hr, "l1_loss");
  const auto a = sr.data();
  const auto b = hr.data();
  const Real count = static_cast<Real>(a.size());
  LossResult out{0, Image(sr.channels(), sr.height(), sr.width())};
  auto g = out.grad_sr.data();
  Real sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Real d = a[i] - b[i];
    if (d > 0) {
      sum += d;
      g[i] = 1 / count;
    } else if (d < 0) {
      sum -= d;
      g[i] = -1 / count;
    }
  }
  out.value = sum / count;
  return out;
}

LossResult tv_loss(const Image& sr) {
  const int c = sr.channels();
  const int h = sr.height();
  const int w = sr.width();
  if (h * w < 2) {
    throw ValidationError("tv_loss: image must have at least two pixels, got " +
                          std::to_string(h) + "x" + std::to_string(w));
  }
  LossResult out{0, Image(c, h, w)};
  const Real nx = static_cast<Real>(c) * h * (w - 1);
  const Real ny = static_cast<Real>(c) * (h - 1) * w;

  Real sx = 0, sy = 0;
  for (int ch = 0; ch < c; ++ch)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const Real v = sr.at(ch, y, x);
        if (x + 1 < w) {
          const Real d = sr.at(ch, y, x + 1) - v;
          sx += d * d;
          const Real g = 2 * d / nx;
          out.grad_sr.at(ch, y, x + 1) += g;
          out.grad_sr.at(ch, y, x) -= g;
        }
        if (y + 1 < h) {
          const Real d = sr.at(ch, y + 1, x) - v;
          sy += d * d;
          const Real g = 2 * d / ny;
          out.grad_sr.at(ch, y + 1, x) += g;
          out.grad_sr.at(ch, y, x) -= g;
        }
      }
  out.value = (nx > 0 ? sx / nx : 0) + (ny > 0 ? sy / ny : 0);
  return out;
}

}  // namespace gvl
