#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>

#include "gvl/errors.hpp"
#include "gvl/resample.hpp"
#include "gvl/trainer.hpp"

namespace gvl {

Upscaler model_upscaler(const ModelParams& params) {
  return [&params](const Image& lr) { return forward(params, lr).sr; };
}

Upscaler bicubic_upscaler(int scale) {
  return [scale](const Image& lr) {
    return bicubic_resize(lr, lr.height() * scale, lr.width() * scale);
  };
}

EvalResult evaluate(const Upscaler& upscaler, const std::vector<LoadedImage>& images,
                    const EvalOptions& options) {
  const int s = options.scale;
  const int n = options.gv_patch;
  if (s < 2) throw ValidationError("evaluate: scale must be >= 2");
  if (n < 2) throw ValidationError("evaluate: gv_patch must be >= 2");
  const int border = options.border < 0 ? s : options.border;
  const int multiple = std::lcm(s, n);

  EvalResult res;
  res.report.border = border;
  for (const auto& item : images) {
    const Image hr = center_crop_to_multiple(item.image, multiple);
    const Image sr = clamped(upscaler(make_lr(hr, s)));
    require_same_shape(sr, hr, "evaluate");
    res.report.rows.push_back({item.path.filename().string(), psnr(sr, hr, border), ssim(sr, hr)});
    res.sr_profiles.push_back(variance_profile(sr, n));
    res.hr_profiles.push_back(variance_profile(hr, n));
  }
  res.report.finalize();

  std::vector<double> all_sr_x, all_sr_y, all_hr_x, all_hr_y;
  for (std::size_t i = 0; i < res.sr_profiles.size(); ++i) {
    const auto& sp = res.sr_profiles[i];
    const auto& hp = res.hr_profiles[i];
    all_sr_x.insert(all_sr_x.end(), sp.vx.begin(), sp.vx.end());
    all_sr_y.insert(all_sr_y.end(), sp.vy.begin(), sp.vy.end());
    all_hr_x.insert(all_hr_x.end(), hp.vx.begin(), hp.vx.end());
    all_hr_y.insert(all_hr_y.end(), hp.vy.begin(), hp.vy.end());
  }
  auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  res.sr_mean_vx = mean(all_sr_x);
  res.sr_mean_vy = mean(all_sr_y);
  res.hr_mean_vx = mean(all_hr_x);
  res.hr_mean_vy = mean(all_hr_y);

  if (!options.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw IoError("cannot create '" + options.out_dir.string() + "'");
    write_metric_csv(res.report, options.out_dir / "metrics.csv");

    // Pooled per-patch variances of all images, on shared edges.
    double hi = 0;
    for (const auto* v : {&all_sr_x, &all_sr_y, &all_hr_x, &all_hr_y})
      for (double x : *v) hi = std::max(hi, x);
    const auto edges = log_edges(kHistogramFloor, hi, kHistogramBins);
    VarianceHistogram pooled_sr, pooled_hr;
    pooled_sr.patch_size = pooled_hr.patch_size = n;
    pooled_sr.vx = all_sr_x;
    pooled_sr.vy = all_sr_y;
    pooled_hr.vx = all_hr_x;
    pooled_hr.vy = all_hr_y;
    pooled_sr = rebinned(pooled_sr, edges);
    pooled_hr = rebinned(pooled_hr, edges);
    write_histogram_csv(pooled_sr, options.out_dir / "histogram_sr.csv");
    write_histogram_csv(pooled_hr, options.out_dir / "histogram_hr.csv");
    write_histogram_svg({{"HR", &pooled_hr}, {"SR", &pooled_sr}},
                        options.out_dir / "histogram.svg");

    const auto vpath = options.out_dir / "variance_summary.csv";
    std::ofstream out(vpath, std::ios::binary);
    if (!out) throw IoError("cannot write '" + vpath.string() + "'");
    out << "path,sr_mean_vx,sr_mean_vy,hr_mean_vx,hr_mean_vy\n";
    for (std::size_t i = 0; i < images.size(); ++i) {
      out << images[i].path.filename().string() << ',' << format_number(res.sr_profiles[i].mean_vx()) << ','
          << format_number(res.sr_profiles[i].mean_vy()) << ','
          << format_number(res.hr_profiles[i].mean_vx()) << ','
          << format_number(res.hr_profiles[i].mean_vy()) << '\n';
    }
    out << "MEAN," << format_number(res.sr_mean_vx) << ',' << format_number(res.sr_mean_vy) << ','
        << format_number(res.hr_mean_vx) << ',' << format_number(res.hr_mean_vy) << '\n';
    out.close();
    if (!out) throw IoError("failed writing '" + vpath.string() + "'");
  }
  return res;
}

EvalResult evaluate(const Upscaler& upscaler, const std::filesystem::path& dir,
                    const EvalOptions& options) {
  Dataset ds = load_dataset(dir);
  EvalResult res = evaluate(upscaler, ds.images, options);
  res.report.skipped = std::move(ds.skipped);
  return res;
}

}  // namespace gvl
