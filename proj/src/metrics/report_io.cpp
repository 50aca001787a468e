#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gvl/errors.hpp"
#include "gvl/metrics.hpp"

namespace gvl {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_number(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_metric_csv(const MetricReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "path,psnr_db,ssim\n";
  for (const auto& r : report.rows) {
    out << r.path << ',' << format_number(r.psnr_db) << ',' << format_number(r.ssim) << '\n';
  }
  out << "MEAN," << format_number(report.mean_psnr_db) << ',' << format_number(report.mean_ssim)
      << '\n';
  close_out(out, path);
}

void write_variance_csv(const VarianceHistogram& profile, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "patch_index,vx,vy\n";
  for (std::size_t i = 0; i < profile.vx.size(); ++i) {
    out << i << ',' << format_number(profile.vx[i], 12) << ','
        << format_number(profile.vy[i], 12) << '\n';
  }
  close_out(out, path);
}

void write_histogram_csv(const VarianceHistogram& profile, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "bin_lo,bin_hi,count_x,count_y\n";
  for (std::size_t b = 0; b + 1 < profile.edges.size(); ++b) {
    out << format_number(profile.edges[b], 12) << ',' << format_number(profile.edges[b + 1], 12)
        << ',' << profile.count_x[b] << ',' << profile.count_y[b] << '\n';
  }
  close_out(out, path);
}

void write_histogram_svg(const std::vector<NamedProfile>& profiles,
                         const std::filesystem::path& path) {
  if (profiles.empty()) throw ValidationError("write_histogram_svg: no profiles");
  const auto& edges = profiles.front().profile->edges;
  for (const auto& p : profiles) {
    if (p.profile->edges != edges) {
      throw ValidationError("write_histogram_svg: profiles must share bin edges");
    }
  }
  static const char* kColors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e"};
  const int panel_w = 480, panel_h = 300, margin = 50;
  const int bins = static_cast<int>(edges.size()) - 1;

  auto out = open_out(path);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n",
                2 * (panel_w + margin) + margin, panel_h + 2 * margin + 20 * int(profiles.size()));
  out << buf;
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (int axis = 0; axis < 2; ++axis) {
    long peak = 1;
    for (const auto& p : profiles) {
      const auto& c = axis == 0 ? p.profile->count_x : p.profile->count_y;
      for (long v : c) peak = std::max(peak, v);
    }
    const int x0 = margin + axis * (panel_w + margin);
    const int y0 = margin;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"#888\"/>\n",
                  x0, y0, panel_w, panel_h);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"14\">"
                  "patch variance of G%s (log bins %.3g .. %.3g)</text>\n",
                  x0, y0 - 10, axis == 0 ? "x" : "y", edges.front(), edges.back());
    out << buf;
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      const auto& c = axis == 0 ? profiles[k].profile->count_x : profiles[k].profile->count_y;
      out << "<polyline fill=\"none\" stroke=\"" << kColors[k % 5] << "\" stroke-width=\"1.5\" "
          << "points=\"";
      for (int b = 0; b < bins; ++b) {
        const double px = x0 + (b + 0.5) * panel_w / bins;
        const double py = y0 + panel_h - static_cast<double>(c[b]) / peak * panel_h;
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", b ? " " : "", px, py);
        out << buf;
      }
      out << "\"/>\n";
    }
  }
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                  "fill=\"%s\">%s (mean vx %.4g, vy %.4g)</text>\n",
                  margin, panel_h + margin + 25 + 20 * int(k), kColors[k % 5],
                  profiles[k].name.c_str(), profiles[k].profile->mean_vx(),
                  profiles[k].profile->mean_vy());
    out << buf;
  }
  out << "</svg>\n";
  close_out(out, path);
}

}  // namespace gvl
