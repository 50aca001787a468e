#include "gvl/losses.hpp"

#include <cmath>
#include <vector>

#include "gvl/errors.hpp"
#include "gvl/patches.hpp"
#include "gvl/resample.hpp"

namespace gvl {

namespace {

// Distance between two variance maps and its cotangent w.r.t. `sr`.
Real map_distance(const VarianceMap& sr, const VarianceMap& hr, GvNorm norm,
                  std::vector<Real>& cot) {
  const std::size_t m = sr.size();
  cot.assign(m, 0);
  Real ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Real d = sr.values[i] - hr.values[i];
    ss += d * d;
  }
  if (norm == GvNorm::kMeanSquared) {
    for (std::size_t i = 0; i < m; ++i) cot[i] = 2 * (sr.values[i] - hr.values[i]) / m;
    return ss / m;
  }
  const Real dist = std::sqrt(ss);
  if (dist > 0) {
    for (std::size_t i = 0; i < m; ++i) cot[i] = (sr.values[i] - hr.values[i]) / dist;
  }
  return dist;
}

}  // namespace

LossResult gv_loss(const Image& sr, const Image& hr, int n, GvNorm norm) {
  require_same_shape(sr, hr, "gv_loss");
  if (n < 2) throw ValidationError("gv_loss: patch size must be >= 2");

  const GradientVariance s = gradient_variance(sr, n);
  const GradientVariance h = gradient_variance(hr, n);

  std::vector<Real> cot_x, cot_y;
  const Real value = map_distance(s.vx, h.vx, norm, cot_x) + map_distance(s.vy, h.vy, norm, cot_y);

  GradientPair grad_maps{fold(patch_variance_backward(s.patches_x, cot_x)),
                         fold(patch_variance_backward(s.patches_y, cot_y))};
  Image grad_gray = sobel_backward(grad_maps);
  return {value, grayscale_backward(grad_gray, sr.channels())};
}

}  // namespace gvl
