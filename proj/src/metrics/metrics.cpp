#include "gvl/metrics.hpp"

#include <cmath>

#include "gvl/errors.hpp"
#include "gvl/losses.hpp"
#include "gvl/resample.hpp"

namespace gvl {

double psnr(const Image& a, const Image& b, int border) {
  require_same_shape(a, b, "psnr");
  const Image ya = crop_border(to_grayscale(a), border);
  const Image yb = crop_border(to_grayscale(b), border);
  const auto da = ya.data();
  const auto db = yb.data();
  double ss = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    ss += d * d;
  }
  const double mse = ss / static_cast<double>(da.size());
  if (mse == 0) return kPsnrInfinity;
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Image& a, const Image& b) { return ssim_value(a, b); }

void MetricReport::finalize() {
  double sp = 0, ss = 0;
  for (const auto& r : rows) {
    sp += r.psnr_db;
    ss += r.ssim;
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  mean_psnr_db = rows.empty() ? 0 : sp / n;
  mean_ssim = rows.empty() ? 0 : ss / n;
}

}  // namespace gvl
