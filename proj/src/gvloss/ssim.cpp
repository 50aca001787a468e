#include <cmath>
#include <string>
#include <vector>

#include "gvl/errors.hpp"
#include "gvl/losses.hpp"
#include "gvl/resample.hpp"

namespace gvl {

namespace {

using Plane = std::vector<double>;

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> g(size);
  const double center = (size - 1) / 2.0;
  double sum = 0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    g[i] = std::exp(-d * d / (2 * sigma * sigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Separable "valid" correlation: (h, w) -> (h - k + 1, w - k + 1).
class ValidFilter {
 public:
  ValidFilter(int h, int w, std::vector<double> taps)
      : h_(h), w_(w), k_(static_cast<int>(taps.size())), taps_(std::move(taps)) {}

  int out_h() const { return h_ - k_ + 1; }
  int out_w() const { return w_ - k_ + 1; }

  Plane apply(const Plane& in) const {
    Plane tmp(static_cast<std::size_t>(h_) * out_w(), 0.0);
    for (int y = 0; y < h_; ++y)
      for (int x = 0; x < out_w(); ++x) {
        double acc = 0;
        for (int t = 0; t < k_; ++t) acc += taps_[t] * in[y * w_ + x + t];
        tmp[y * out_w() + x] = acc;
      }
    Plane out(static_cast<std::size_t>(out_h()) * out_w(), 0.0);
    for (int y = 0; y < out_h(); ++y)
      for (int t = 0; t < k_; ++t) {
        const double wt = taps_[t];
        const double* src = &tmp[(y + t) * out_w()];
        double* dst = &out[y * out_w()];
        for (int x = 0; x < out_w(); ++x) dst[x] += wt * src[x];
      }
    return out;
  }

  // Adjoint of apply.
  Plane transpose(const Plane& cot) const {
    Plane tmp(static_cast<std::size_t>(h_) * out_w(), 0.0);
    for (int y = 0; y < out_h(); ++y)
      for (int t = 0; t < k_; ++t) {
        const double wt = taps_[t];
        const double* src = &cot[y * out_w()];
        double* dst = &tmp[(y + t) * out_w()];
        for (int x = 0; x < out_w(); ++x) dst[x] += wt * src[x];
      }
    Plane out(static_cast<std::size_t>(h_) * w_, 0.0);
    for (int y = 0; y < h_; ++y)
      for (int x = 0; x < out_w(); ++x) {
        const double v = tmp[y * out_w() + x];
        for (int t = 0; t < k_; ++t) out[y * w_ + x + t] += taps_[t] * v;
      }
    return out;
  }

 private:
  int h_, w_, k_;
  std::vector<double> taps_;
};

Plane to_plane(const Image& gray) {
  auto d = gray.plane(0);
  return Plane(d.begin(), d.end());
}

Plane product(const Plane& a, const Plane& b) {
  Plane out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

struct SsimForward {
  Plane x, y;
  Plane mu_x, mu_y, e_xx, e_yy, e_xy;
  Plane map;
  double mean = 0;
};

SsimForward ssim_forward(const Image& a, const Image& b, const SsimParams& p,
                         const ValidFilter& filter) {
  SsimForward f;
  f.x = to_plane(to_grayscale(a));
  f.y = to_plane(to_grayscale(b));
  f.mu_x = filter.apply(f.x);
  f.mu_y = filter.apply(f.y);
  f.e_xx = filter.apply(product(f.x, f.x));
  f.e_yy = filter.apply(product(f.y, f.y));
  f.e_xy = filter.apply(product(f.x, f.y));

  const double c1 = (p.k1 * p.range) * (p.k1 * p.range);
  const double c2 = (p.k2 * p.range) * (p.k2 * p.range);
  f.map.resize(f.mu_x.size());
  double sum = 0;
  for (std::size_t i = 0; i < f.map.size(); ++i) {
    const double mx = f.mu_x[i], my = f.mu_y[i];
    const double mxy = mx * my;
    const double vx = f.e_xx[i] - mx * mx;
    const double vy = f.e_yy[i] - my * my;
    const double cxy = f.e_xy[i] - mxy;
    const double num = (2 * mxy + c1) * (2 * cxy + c2);
    const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
    f.map[i] = num / den;
    sum += f.map[i];
  }
  f.mean = sum / static_cast<double>(f.map.size());
  return f;
}

void check_ssim_inputs(const Image& a, const Image& b, const SsimParams& p, const char* what) {
  require_same_shape(a, b, what);
  if (p.window < 1 || p.window % 2 == 0) {
    throw ValidationError(std::string(what) + ": window must be a positive odd size");
  }
  if (a.height() < p.window || a.width() < p.window) {
    throw ValidationError(std::string(what) + ": image " + std::to_string(a.height()) + "x" +
                          std::to_string(a.width()) + " is smaller than the " +
                          std::to_string(p.window) + "x" + std::to_string(p.window) +
                          " window");
  }
}

}  // namespace

Real ssim_value(const Image& a, const Image& b, const SsimParams& params) {
  check_ssim_inputs(a, b, params, "ssim");
  const ValidFilter filter(a.height(), a.width(), gaussian_window(params.window, params.sigma));
  return static_cast<Real>(ssim_forward(a, b, params, filter).mean);
}

LossResult ssim_loss(const Image& sr, const Image& hr, const SsimParams& params) {
  check_ssim_inputs(sr, hr, params, "ssim_loss");
  const ValidFilter filter(sr.height(), sr.width(), gaussian_window(params.window, params.sigma));
  const SsimForward f = ssim_forward(sr, hr, params, filter);

  const double c1 = (params.k1 * params.range) * (params.k1 * params.range);
  const double c2 = (params.k2 * params.range) * (params.k2 * params.range);
  const double upstream = -1.0 / static_cast<double>(f.map.size());

  // S = A1 A2 / (B1 B2) with A1 = 2 mx my + C1, A2 = 2 (Exy - mx my) + C2,
  // B1 = mx^2 + my^2 + C1, B2 = Exx - mx^2 + Eyy - my^2 + C2.
  Plane g_mu(f.map.size()), g_exx(f.map.size()), g_exy(f.map.size());
  for (std::size_t i = 0; i < f.map.size(); ++i) {
    const double mx = f.mu_x[i], my = f.mu_y[i];
    const double a1 = 2 * mx * my + c1;
    const double a2 = 2 * (f.e_xy[i] - mx * my) + c2;
    const double b1 = mx * mx + my * my + c1;
    const double b2 = f.e_xx[i] - mx * mx + f.e_yy[i] - my * my + c2;
    const double s = f.map[i] * upstream;
    g_mu[i] = s * (2 * my / a1 - 2 * my / a2 - 2 * mx / b1 + 2 * mx / b2);
    g_exx[i] = s * (-1 / b2);
    g_exy[i] = s * (2 / a2);
  }

  const Plane t_mu = filter.transpose(g_mu);
  const Plane t_exx = filter.transpose(g_exx);
  const Plane t_exy = filter.transpose(g_exy);

  Image grad_gray(1, sr.height(), sr.width());
  auto g = grad_gray.plane(0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = static_cast<Real>(t_mu[i] + 2 * f.x[i] * t_exx[i] + f.y[i] * t_exy[i]);
  }
  return {static_cast<Real>(1.0 - f.mean), grayscale_backward(grad_gray, sr.channels())};
}

}  // namespace gvl
