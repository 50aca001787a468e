#include "gvl/patches.hpp"

#include <string>

#include "gvl/errors.hpp"
#include "gvl/resample.hpp"

namespace gvl {

UnfoldedPatches unfold(const Image& map, int n) {
  if (map.channels() != 1) throw ValidationError("unfold: expected a 1-channel map");
  if (n < 1) throw ValidationError("unfold: patch size must be >= 1");
  if (map.height() % n != 0 || map.width() % n != 0) {
    throw ValidationError("unfold: " + std::to_string(map.height()) + "x" +
                          std::to_string(map.width()) + " is not divisible by patch size " +
                          std::to_string(n));
  }
  UnfoldedPatches out;
  out.patch_size = n;
  out.grid_rows = map.height() / n;
  out.grid_cols = map.width() / n;
  out.values.resize(map.size());
  for (int py = 0; py < out.grid_rows; ++py)
    for (int px = 0; px < out.grid_cols; ++px) {
      Real* col = out.column(py * out.grid_cols + px);
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) col[y * n + x] = map.at(0, py * n + y, px * n + x);
    }
  return out;
}

Image fold(const UnfoldedPatches& patches) {
  const int n = patches.patch_size;
  Image out(1, patches.grid_rows * n, patches.grid_cols * n);
  for (int py = 0; py < patches.grid_rows; ++py)
    for (int px = 0; px < patches.grid_cols; ++px) {
      const Real* col = patches.column(py * patches.grid_cols + px);
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) out.at(0, py * n + y, px * n + x) = col[y * n + x];
    }
  return out;
}

VarianceMap patch_variance(const UnfoldedPatches& patches) {
  if (patches.patch_size < 2) {
    throw ValidationError("patch_variance: patch size must be >= 2 (divisor n^2 - 1)");
  }
  const int m = patches.rows();
  VarianceMap out{patches.grid_rows, patches.grid_cols, std::vector<Real>(patches.cols())};
  for (int j = 0; j < patches.cols(); ++j) {
    const Real* col = patches.column(j);
    Real sum = 0;
    for (int i = 0; i < m; ++i) sum += col[i];
    const Real mean = sum / m;
    Real ss = 0;
    for (int i = 0; i < m; ++i) {
      const Real d = col[i] - mean;
      ss += d * d;
    }
    out.values[j] = ss / (m - 1);
  }
  return out;
}

UnfoldedPatches patch_variance_backward(const UnfoldedPatches& patches,
                                        const std::vector<Real>& variance_cot) {
  if (variance_cot.size() != static_cast<std::size_t>(patches.cols())) {
    throw ValidationError("patch_variance_backward: cotangent length mismatch");
  }
  const int m = patches.rows();
  UnfoldedPatches grad = patches;
  for (int j = 0; j < patches.cols(); ++j) {
    const Real* col = patches.column(j);
    Real* g = grad.column(j);
    Real sum = 0;
    for (int i = 0; i < m; ++i) sum += col[i];
    const Real mean = sum / m;
    // d v / d x_i = 2 (x_i - mean) / (m - 1); the mean's own dependence cancels.
    const Real scale = 2 * variance_cot[j] / (m - 1);
    for (int i = 0; i < m; ++i) g[i] = scale * (col[i] - mean);
  }
  return grad;
}

GradientVariance gradient_variance(const Image& img, int n) {
  GradientVariance gv;
  gv.gray = to_grayscale(img);
  gv.gradients = sobel_forward(gv.gray);
  gv.patches_x = unfold(gv.gradients.gx, n);
  gv.patches_y = unfold(gv.gradients.gy, n);
  gv.vx = patch_variance(gv.patches_x);
  gv.vy = patch_variance(gv.patches_y);
  return gv;
}

}  // namespace gvl
