#include <string>

#include "gvl/errors.hpp"
#include "gvl/model.hpp"

namespace gvl {

Image pixel_shuffle(const Image& t, int s) {
  if (s < 1) throw ValidationError("pixel_shuffle: factor must be >= 1");
  if (s == 1) return t;
  const int ss = s * s;
  if (t.channels() % ss != 0) {
    throw ValidationError("pixel_shuffle: " + std::to_string(t.channels()) +
                          " channels not divisible by " + std::to_string(ss));
  }
  const int c = t.channels() / ss;
  Image out(c, t.height() * s, t.width() * s);
  for (int oc = 0; oc < c; ++oc)
    for (int dy = 0; dy < s; ++dy)
      for (int dx = 0; dx < s; ++dx) {
        const int ic = oc * ss + dy * s + dx;
        for (int y = 0; y < t.height(); ++y)
          for (int x = 0; x < t.width(); ++x) out.at(oc, y * s + dy, x * s + dx) = t.at(ic, y, x);
      }
  return out;
}

Image pixel_unshuffle(const Image& t, int s) {
  if (s < 1) throw ValidationError("pixel_unshuffle: factor must be >= 1");
  if (s == 1) return t;
  if (t.height() % s != 0 || t.width() % s != 0) {
    throw ValidationError("pixel_unshuffle: spatial size not divisible by factor");
  }
  const int ss = s * s;
  const int h = t.height() / s, w = t.width() / s;
  Image out(t.channels() * ss, h, w);
  for (int oc = 0; oc < t.channels(); ++oc)
    for (int dy = 0; dy < s; ++dy)
      for (int dx = 0; dx < s; ++dx) {
        const int ic = oc * ss + dy * s + dx;
        for (int y = 0; y < h; ++y)
          for (int x = 0; x < w; ++x) out.at(ic, y, x) = t.at(oc, y * s + dy, x * s + dx);
      }
  return out;
}

}  // namespace gvl
