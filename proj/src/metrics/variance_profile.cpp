#include <algorithm>
#include <cmath>

#include "gvl/errors.hpp"
#include "gvl/metrics.hpp"
#include "gvl/resample.hpp"

namespace gvl {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double VarianceHistogram::mean_vx() const { return mean_of(vx); }
double VarianceHistogram::mean_vy() const { return mean_of(vy); }

std::vector<double> log_edges(double lo, double hi, int bins) {
  if (!(lo > 0) || bins < 1) throw ValidationError("log_edges: need lo > 0 and bins >= 1");
  hi = std::max(hi, 10 * lo);
  std::vector<double> edges(bins + 1);
  const double ratio = std::log(hi / lo);
  for (int k = 0; k <= bins; ++k) edges[k] = lo * std::exp(ratio * k / bins);
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

std::vector<long> bin_counts(const std::vector<double>& values, const std::vector<double>& edges) {
  const int bins = static_cast<int>(edges.size()) - 1;
  if (bins < 1) throw ValidationError("bin_counts: need at least two edges");
  std::vector<long> counts(bins, 0);
  for (double v : values) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const int idx = std::clamp(static_cast<int>(it - edges.begin()) - 1, 0, bins - 1);
    ++counts[idx];
  }
  return counts;
}

VarianceHistogram variance_profile(const Image& img, int n, const std::vector<double>& edges) {
  if (n < 2) throw ValidationError("variance_profile: patch size must be >= 2");
  if (img.height() < n || img.width() < n) {
    throw ValidationError("variance_profile: image smaller than patch size");
  }
  const GradientVariance gv = gradient_variance(center_crop_to_multiple(img, n), n);

  VarianceHistogram out;
  out.patch_size = n;
  out.grid_rows = gv.vx.grid_rows;
  out.grid_cols = gv.vx.grid_cols;
  out.vx.assign(gv.vx.values.begin(), gv.vx.values.end());
  out.vy.assign(gv.vy.values.begin(), gv.vy.values.end());
  if (edges.empty()) {
    double hi = 0;
    for (double v : out.vx) hi = std::max(hi, v);
    for (double v : out.vy) hi = std::max(hi, v);
    return rebinned(out, log_edges(kHistogramFloor, hi, kHistogramBins));
  }
  return rebinned(out, edges);
}

VarianceHistogram rebinned(const VarianceHistogram& profile, const std::vector<double>& edges) {
  VarianceHistogram out = profile;
  out.edges = edges;
  out.count_x = bin_counts(out.vx, edges);
  out.count_y = bin_counts(out.vy, edges);
  return out;
}

}  // namespace gvl
