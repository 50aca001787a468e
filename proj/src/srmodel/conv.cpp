#include <algorithm>

#include "gvl/errors.hpp"
#include "gvl/model.hpp"

namespace gvl {

Image pad_replicate(const Image& in, int pad) {
  if (pad == 0) return in;
  const int h = in.height(), w = in.width();
  Image out(in.channels(), h + 2 * pad, w + 2 * pad);
  for (int c = 0; c < in.channels(); ++c)
    for (int y = 0; y < h + 2 * pad; ++y) {
      const int sy = std::clamp(y - pad, 0, h - 1);
      for (int x = 0; x < w + 2 * pad; ++x) {
        out.at(c, y, x) = in.at(c, sy, std::clamp(x - pad, 0, w - 1));
      }
    }
  return out;
}

Image pad_replicate_backward(const Image& grad_padded, int pad) {
  if (pad == 0) return grad_padded;
  const int h = grad_padded.height() - 2 * pad;
  const int w = grad_padded.width() - 2 * pad;
  Image out(grad_padded.channels(), h, w);
  for (int c = 0; c < grad_padded.channels(); ++c)
    for (int y = 0; y < h + 2 * pad; ++y) {
      const int sy = std::clamp(y - pad, 0, h - 1);
      for (int x = 0; x < w + 2 * pad; ++x) {
        out.at(c, sy, std::clamp(x - pad, 0, w - 1)) += grad_padded.at(c, y, x);
      }
    }
  return out;
}

Image conv_forward(const ConvSpec& spec, const Real* weights, const Real* bias,
                   const Image& padded) {
  const int k = spec.kernel;
  const int h = padded.height() - (k - 1);
  const int w = padded.width() - (k - 1);
  const int pw = padded.width();
  if (padded.channels() != spec.in_ch || h < 1 || w < 1) {
    throw ValidationError("conv_forward: input does not match layer spec");
  }
  Image out(spec.out_ch, h, w);
  for (int o = 0; o < spec.out_ch; ++o) {
    auto dst = out.plane(o);
    std::fill(dst.begin(), dst.end(), bias[o]);
    for (int i = 0; i < spec.in_ch; ++i) {
      const Real* src = padded.plane(i).data();
      const Real* wk = weights + (static_cast<std::size_t>(o) * spec.in_ch + i) * k * k;
      for (int ky = 0; ky < k; ++ky)
        for (int kx = 0; kx < k; ++kx) {
          const Real wv = wk[ky * k + kx];
          for (int y = 0; y < h; ++y) {
            const Real* row = src + (y + ky) * pw + kx;
            Real* out_row = dst.data() + y * w;
            for (int x = 0; x < w; ++x) out_row[x] += wv * row[x];
          }
        }
    }
  }
  return out;
}

void conv_backward(const ConvSpec& spec, const Real* weights, const Image& padded,
                   const Image& grad_out, Real* grad_weights, Real* grad_bias,
                   Image* grad_padded) {
  const int k = spec.kernel;
  const int h = grad_out.height();
  const int w = grad_out.width();
  const int pw = padded.width();
  if (grad_padded) *grad_padded = Image(padded.channels(), padded.height(), padded.width());

  for (int o = 0; o < spec.out_ch; ++o) {
    const auto go = grad_out.plane(o);
    Real bsum = 0;
    for (Real g : go) bsum += g;
    grad_bias[o] += bsum;

    for (int i = 0; i < spec.in_ch; ++i) {
      const Real* src = padded.plane(i).data();
      const std::size_t base = (static_cast<std::size_t>(o) * spec.in_ch + i) * k * k;
      Real* gp = grad_padded ? grad_padded->plane(i).data() : nullptr;
      for (int ky = 0; ky < k; ++ky)
        for (int kx = 0; kx < k; ++kx) {
          const Real wv = weights[base + ky * k + kx];
          Real acc = 0;
          for (int y = 0; y < h; ++y) {
            const Real* row = src + (y + ky) * pw + kx;
            const Real* g = go.data() + y * w;
            for (int x = 0; x < w; ++x) acc += g[x] * row[x];
            if (gp) {
              Real* dst = gp + (y + ky) * pw + kx;
              for (int x = 0; x < w; ++x) dst[x] += wv * g[x];
            }
          }
          grad_weights[base + ky * k + kx] += acc;
        }
    }
  }
}

}  // namespace gvl
