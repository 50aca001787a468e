#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "gvl/image.hpp"
#include "gvl/patches.hpp"

namespace gvl {

/// Returned by psnr() when the images are identical.
inline constexpr double kPsnrInfinity = std::numeric_limits<double>::infinity();

/// PSNR in dB on luma after removing `border` pixels from every side.
/// Peak value is 1.0. Identical inputs give kPsnrInfinity.
double psnr(const Image& a, const Image& b, int border = 0);

/// Mean Gaussian-window SSIM on luma (same constants as ssim_loss).
double ssim(const Image& a, const Image& b);

struct MetricRow {
  std::string path;
  double psnr_db = 0;
  double ssim = 0;
};

struct MetricReport {
  std::vector<MetricRow> rows;
  double mean_psnr_db = 0;
  double mean_ssim = 0;
  int border = 0;
  std::vector<std::string> skipped;  // unreadable inputs, with reason

  /// Recomputes the means from rows (an infinite PSNR makes the mean infinite).
  void finalize();
};

/// Log-spaced histogram of per-patch gradient variances for both axes.
struct VarianceHistogram {
  int patch_size = 0;
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<double> edges;  // bins + 1, strictly increasing
  std::vector<long> count_x;
  std::vector<long> count_y;
  std::vector<double> vx;  // raw per-patch variances, row-major patch order
  std::vector<double> vy;

  double mean_vx() const;
  double mean_vy() const;
};

inline constexpr double kHistogramFloor = 1e-8;
inline constexpr int kHistogramBins = 64;

/// `bins` log-spaced bins from lo to max(hi, 10 lo).
std::vector<double> log_edges(double lo, double hi, int bins);

/// Counts per bin; values below the first edge land in bin 0, values above
/// the last edge in the last bin.
std::vector<long> bin_counts(const std::vector<double>& values, const std::vector<double>& edges);

/// Centre-crops to a multiple of n, then runs gray -> Sobel -> unfold ->
/// variance. Edges default to [1e-8, max observed] when `edges` is empty.
VarianceHistogram variance_profile(const Image& img, int n,
                                   const std::vector<double>& edges = {});

/// Rebins an existing profile onto new edges.
VarianceHistogram rebinned(const VarianceHistogram& profile, const std::vector<double>& edges);

// CSV / SVG writers. All numbers are printed with fixed precision so equal
// inputs give identical bytes.
void write_metric_csv(const MetricReport& report, const std::filesystem::path& path);
void write_variance_csv(const VarianceHistogram& profile, const std::filesystem::path& path);
void write_histogram_csv(const VarianceHistogram& profile, const std::filesystem::path& path);

struct NamedProfile {
  std::string name;
  const VarianceHistogram* profile;
};

/// Two panels (x and y axes) overlaying the histograms of all profiles.
/// Profiles must share edges.
void write_histogram_svg(const std::vector<NamedProfile>& profiles,
                         const std::filesystem::path& path);

/// "%.9g"-style formatting with "inf" for infinities.
std::string format_number(double v, int digits = 9);

}  // namespace gvl
