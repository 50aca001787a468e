// Command-line front end: dataset generation, training, evaluation, loss
// computation and gradient-variance map export.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gvl/checkpoint.hpp"
#include "gvl/errors.hpp"
#include "gvl/losses.hpp"
#include "gvl/metrics.hpp"
#include "gvl/patches.hpp"
#include "gvl/png_io.hpp"
#include "gvl/resample.hpp"
#include "gvl/sobel.hpp"
#include "gvl/trainer.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

// Gradient maps are shown with a fixed affine map [-4, 4] -> [0, 1].
constexpr double kGradientVisRange = 4.0;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw gvl::IoError("cannot create '" + dir.string() + "': " + ec.message());
}

gvl::Image gradient_to_vis(const gvl::Image& g) {
  gvl::Image out = g;
  for (auto& v : out.data()) {
    v = static_cast<gvl::Real>((v + kGradientVisRange) / (2 * kGradientVisRange));
  }
  return out;
}

// Symmetric per-image scaling so zero maps to mid-gray.
gvl::Image cotangent_to_vis(const gvl::Image& g) {
  double peak = 0;
  for (auto v : g.data()) peak = std::max(peak, std::abs(static_cast<double>(v)));
  gvl::Image out = g;
  for (auto& v : out.data()) {
    v = static_cast<gvl::Real>(peak > 0 ? 0.5 + 0.5 * v / peak : 0.5);
  }
  return out;
}

// Nearest-neighbour blow-up of a patch grid to pixel resolution.
gvl::Image variance_to_vis(const gvl::VarianceMap& v, int n, double peak) {
  gvl::Image out(1, v.grid_rows * n, v.grid_cols * n);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      const double val = v.values[(y / n) * v.grid_cols + x / n];
      out.at(0, y, x) = static_cast<gvl::Real>(peak > 0 ? val / peak : 0.0);
    }
  return out;
}

std::string format_loss(double v) {
  if (v == 0) return "0.000000000";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Flags shared by train and ablate; unset flags leave the config untouched.
struct TrainFlags {
  std::string config_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> scale, n, epochs, batch, crop, features, val_count, synthetic_count,
      synthetic_size;
  std::optional<double> lambda, lr;
  std::optional<std::string> loss, gv_norm, data_dir, val_dir;
  bool verbose = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "Key = value config file (flags override it)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", out_dir, "Output directory for all run artifacts (or out_dir in --config)");
    cmd->add_option("--seed", seed, "Run seed (init, shuffling, crops, synthetic data)");
    cmd->add_option("--scale", scale, "Upscaling factor s");
    cmd->add_option("--n", n, "GV patch size (default 8 for s=2, 16 for s=3,4)");
    cmd->add_option("--loss", loss, "Loss label, e.g. l2, l1+tv, ssim+gv");
    cmd->add_option("--lambda", lambda, "Regularizer weight");
    cmd->add_option("--gv-norm", gv_norm, "GV reduction: mse (default) or l2")
        ->check(CLI::IsMember({"mse", "l2"}));
    cmd->add_option("--epochs", epochs, "Training epochs");
    cmd->add_option("--batch", batch, "Batch size");
    cmd->add_option("--crop", crop, "HR training crop size");
    cmd->add_option("--lr", lr, "Adam learning rate");
    cmd->add_option("--features", features, "Hidden feature maps per layer");
    cmd->add_option("--data-dir", data_dir, "Directory of HR PNGs (default: synthetic set)");
    cmd->add_option("--val-dir", val_dir, "Validation HR PNGs (default: tail of data)");
    cmd->add_option("--val-count", val_count, "Validation images taken from the data tail");
    cmd->add_option("--synthetic-count", synthetic_count, "Synthetic set size");
    cmd->add_option("--synthetic-size", synthetic_size, "Synthetic image side length");
    cmd->add_flag("--verbose", verbose, "Print per-epoch progress to stderr");
  }

  void apply(gvl::TrainConfig& c) const {
    if (!config_file.empty()) gvl::apply_config_file(c, config_file);
    if (seed) c.seed = *seed;
    if (scale) {
      c.scale = *scale;
      if (!n) c.loss.gv_patch = gvl::default_gv_patch(*scale);
    }
    if (n) c.loss.gv_patch = *n;
    if (lambda) c.loss.reg_weight = static_cast<gvl::Real>(*lambda);
    if (loss) gvl::apply_config_value(c, "loss", *loss);
    if (gv_norm) gvl::apply_config_value(c, "gv_norm", *gv_norm);
    if (epochs) c.epochs = *epochs;
    if (batch) c.batch_size = *batch;
    if (crop) c.crop_size = *crop;
    if (lr) c.learning_rate = static_cast<gvl::Real>(*lr);
    if (features) c.features = *features;
    if (data_dir) c.data_dir = *data_dir;
    if (val_dir) c.val_dir = *val_dir;
    if (val_count) c.val_count = *val_count;
    if (synthetic_count) c.synthetic_count = *synthetic_count;
    if (synthetic_size) c.synthetic_size = *synthetic_size;
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (c.out_dir.empty()) throw gvl::ValidationError("--out-dir (or out_dir in --config) is required");
    c.verbose = verbose;
  }
};

int run_loss(const std::string& a_path, const std::string& b_path, const std::string& loss_name,
             int n, double lambda, const std::string& grad_out) {
  const gvl::Image a = gvl::load_png(a_path);
  gvl::LossResult res;
  const std::string name = [&] {
    std::string s = loss_name;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    return s;
  }();

  if (name == "tv") {
    if (!b_path.empty()) std::cerr << "warning: --loss tv is unary; ignoring " << b_path << '\n';
    res = gvl::tv_loss(a);
  } else {
    if (b_path.empty()) throw gvl::ValidationError("loss '" + loss_name + "' needs two images");
    const gvl::Image b = gvl::load_png(b_path);
    gvl::require_same_shape(a, b, "loss");
    if (name == "gv") {
      res = gvl::gv_loss(a, b, n);
    } else {
      const auto spec = gvl::parse_loss_label(name, static_cast<gvl::Real>(lambda), n);
      res = gvl::composite_loss(spec, a, b);
    }
  }
  std::cout << format_loss(res.value) << '\n';
  if (!grad_out.empty()) gvl::save_png(cotangent_to_vis(res.grad_sr), grad_out);
  return 0;
}

int run_gvmap(const std::string& path, int n, const std::string& prefix) {
  const gvl::Image img = gvl::center_crop_to_multiple(gvl::load_png(path), n);
  const gvl::GradientVariance gv = gvl::gradient_variance(img, n);
  const fs::path parent = fs::path(prefix).parent_path();
  if (!parent.empty()) ensure_dir(parent);

  gvl::save_png(gradient_to_vis(gv.gradients.gx), prefix + "_gx.png");
  gvl::save_png(gradient_to_vis(gv.gradients.gy), prefix + "_gy.png");
  double peak = 0;
  for (auto v : gv.vx.values) peak = std::max(peak, static_cast<double>(v));
  for (auto v : gv.vy.values) peak = std::max(peak, static_cast<double>(v));
  gvl::save_png(variance_to_vis(gv.vx, n, peak), prefix + "_vx.png");
  gvl::save_png(variance_to_vis(gv.vy, n, peak), prefix + "_vy.png");
  gvl::write_variance_csv(gvl::variance_profile(img, n), prefix + "_variance.csv");
  return 0;
}

int run_analyze(const std::string& hr_path, const std::vector<std::string>& sr_paths, int n,
                const fs::path& out_dir) {
  ensure_dir(out_dir);
  std::vector<std::pair<std::string, gvl::VarianceHistogram>> profiles;
  profiles.emplace_back("hr", gvl::variance_profile(gvl::load_png(hr_path), n));
  for (std::size_t i = 0; i < sr_paths.size(); ++i) {
    profiles.emplace_back("sr" + std::to_string(i),
                          gvl::variance_profile(gvl::load_png(sr_paths[i]), n));
  }
  double hi = 0;
  for (const auto& [name, p] : profiles) {
    for (double v : p.vx) hi = std::max(hi, v);
    for (double v : p.vy) hi = std::max(hi, v);
  }
  const auto edges = gvl::log_edges(gvl::kHistogramFloor, hi, gvl::kHistogramBins);
  std::vector<gvl::NamedProfile> named;
  std::ofstream summary(out_dir / "summary.csv", std::ios::binary);
  if (!summary) throw gvl::IoError("cannot write summary.csv");
  summary << "name,path,mean_vx,mean_vy\n";
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    auto& [name, p] = profiles[i];
    p = gvl::rebinned(p, edges);
    gvl::write_variance_csv(p, out_dir / ("variance_" + name + ".csv"));
    gvl::write_histogram_csv(p, out_dir / ("histogram_" + name + ".csv"));
    const std::string& src = i == 0 ? hr_path : sr_paths[i - 1];
    summary << name << ',' << fs::path(src).filename().string() << ','
            << gvl::format_number(p.mean_vx()) << ','
            << gvl::format_number(p.mean_vy()) << '\n';
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const std::string& src = i == 0 ? hr_path : sr_paths[i - 1];
    named.push_back({profiles[i].first + " " + fs::path(src).filename().string(),
                     &profiles[i].second});
  }
  gvl::write_histogram_svg(named, out_dir / "histogram.svg");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradient-variance loss toolkit for image super-resolution"};
  app.require_subcommand(1);

  // make-dataset
  auto* mk = app.add_subcommand("make-dataset", "Write a seeded synthetic HR image set");
  std::string mk_out;
  gvl::SyntheticSetSpec mk_spec;
  int mk_size = 96;
  mk->add_option("--out-dir", mk_out, "Directory for PNGs and manifest.txt")->required();
  mk->add_option("--count", mk_spec.count, "Number of images")->capture_default_str();
  mk->add_option("--size", mk_size, "Image side length in pixels")->capture_default_str();
  mk->add_option("--seed", mk_spec.seed, "Generator seed")->capture_default_str();

  // train
  auto* tr = app.add_subcommand("train", "Train the SR network with a composite loss");
  TrainFlags tr_flags;
  tr_flags.add_to(tr);

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint (or bicubic) on HR images");
  std::string ev_ckpt, ev_data, ev_out;
  int ev_border = -1, ev_n = 0, ev_scale = 2;
  bool ev_bicubic = false;
  ev->add_option("--checkpoint", ev_ckpt, "Checkpoint file from train");
  ev->add_flag("--bicubic", ev_bicubic, "Evaluate plain bicubic upscaling instead of a model");
  ev->add_option("--scale", ev_scale, "Scale for --bicubic (checkpoints carry their own)")
      ->capture_default_str();
  ev->add_option("--data-dir", ev_data, "Directory of HR PNGs")->required();
  ev->add_option("--out-dir", ev_out, "Output directory for CSV/SVG reports")->required();
  ev->add_option("--border", ev_border, "Border crop for PSNR (default: scale)");
  ev->add_option("--n", ev_n, "Patch size for variance profiles (default by scale)");

  // ablate
  auto* ab = app.add_subcommand("ablate", "Train and compare a grid of loss configurations");
  TrainFlags ab_flags;
  ab_flags.add_to(ab);
  std::string ab_preset = "table2-desk", ab_losses;
  int ab_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  ab->add_option("--preset", ab_preset, "Experiment preset")
      ->check(CLI::IsMember({"table2-desk"}))
      ->capture_default_str();
  ab->add_option("--losses", ab_losses, "Comma-separated subset of the grid, e.g. L2,L2+GV");
  ab->add_option("--threads", ab_threads, "Concurrent training runs")->capture_default_str();

  // loss
  auto* ls = app.add_subcommand("loss", "Compute a loss between two PNG images");
  std::string ls_a, ls_b, ls_name = "gv", ls_grad;
  int ls_n = 8;
  double ls_lambda = 1.0;
  ls->add_option("sr", ls_a, "Prediction image")->required();
  ls->add_option("hr", ls_b, "Target image (not needed for tv)");
  ls->add_option("--loss", ls_name, "l1, l2, tv, ssim, gv or a composite like l2+gv")
      ->capture_default_str();
  ls->add_option("--n", ls_n, "GV patch size")->capture_default_str();
  ls->add_option("--lambda", ls_lambda, "Regularizer weight for composite losses")
      ->capture_default_str();
  ls->add_option("--grad-out", ls_grad, "Write a visualization of d loss / d sr to this PNG");

  // gvmap
  auto* gm = app.add_subcommand("gvmap", "Export Sobel gradient and patch-variance maps");
  std::string gm_img, gm_prefix;
  int gm_n = 8;
  gm->add_option("image", gm_img, "Input PNG")->required();
  gm->add_option("--n", gm_n, "Patch size")->capture_default_str();
  gm->add_option("--out-prefix", gm_prefix, "Output path prefix")->required();

  // analyze-variance
  auto* av = app.add_subcommand("analyze-variance",
                                "Patch-variance distributions of an HR image and SR outputs");
  std::string av_hr, av_out;
  std::vector<std::string> av_sr;
  int av_n = 8;
  av->add_option("hr", av_hr, "Ground-truth HR PNG")->required();
  av->add_option("--sr", av_sr, "SR output PNG(s) to compare");
  av->add_option("--n", av_n, "Patch size")->capture_default_str();
  av->add_option("--out-dir", av_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*mk) {
      mk_spec.height = mk_spec.width = mk_size;
      const auto manifest = gvl::make_synthetic_dataset(mk_spec, mk_out);
      std::cout << "wrote " << manifest.files.size() << " images to " << mk_out << '\n';
      return 0;
    }
    if (*tr) {
      gvl::TrainConfig config;
      tr_flags.apply(config);
      const auto result = gvl::train(config);
      if (!result.epochs.empty()) {
        const auto& last = result.epochs.back();
        std::cout << "final epoch " << last.epoch << ": loss "
                  << gvl::format_number(last.train_loss, 6) << ", val PSNR "
                  << gvl::format_number(last.val_psnr_db, 6) << " dB, SSIM "
                  << gvl::format_number(last.val_ssim, 6) << '\n';
      }
      std::cout << "checkpoint: " << (config.out_dir / "checkpoint.bin").string() << '\n';
      return 0;
    }
    if (*ev) {
      gvl::EvalOptions opts;
      opts.out_dir = ev_out;
      opts.border = ev_border;
      gvl::EvalResult res;
      if (ev_bicubic) {
        opts.scale = ev_scale;
        opts.gv_patch = ev_n > 0 ? ev_n : gvl::default_gv_patch(ev_scale);
        res = gvl::evaluate(gvl::bicubic_upscaler(ev_scale), ev_data, opts);
      } else {
        if (ev_ckpt.empty()) throw gvl::ValidationError("eval: --checkpoint or --bicubic required");
        const gvl::ModelParams params = gvl::load_checkpoint(ev_ckpt);
        opts.scale = params.spec.scale;
        opts.gv_patch = ev_n > 0 ? ev_n : gvl::default_gv_patch(params.spec.scale);
        res = gvl::evaluate(gvl::model_upscaler(params), ev_data, opts);
      }
      for (const auto& s : res.report.skipped) std::cerr << "skipped: " << s << '\n';
      std::cout << "images " << res.report.rows.size() << ", mean PSNR "
                << gvl::format_number(res.report.mean_psnr_db, 6) << " dB (border "
                << res.report.border << ", luma), mean SSIM "
                << gvl::format_number(res.report.mean_ssim, 6) << '\n';
      return 0;
    }
    if (*ab) {
      gvl::TrainConfig config = gvl::desk_preset();
      ab_flags.apply(config);
      std::vector<gvl::CompositeLossSpec> grid =
          gvl::loss_grid(config.loss.reg_weight, config.loss.gv_patch);
      if (!ab_losses.empty()) {
        std::vector<gvl::CompositeLossSpec> subset;
        for (const auto& label : split_list(ab_losses)) {
          auto spec = gvl::parse_loss_label(label, config.loss.reg_weight, config.loss.gv_patch);
          spec.gv_norm = config.loss.gv_norm;
          subset.push_back(spec);
        }
        grid = subset;
      }
      for (auto& spec : grid) spec.gv_norm = config.loss.gv_norm;
      ensure_dir(config.out_dir);
      gvl::write_run_manifest(config, config.out_dir);
      const auto result = gvl::ablation(config, grid, ab_threads);
      std::cout << "loss            PSNR(dB)   SSIM       mean_vx    mean_vy\n";
      for (const auto& r : result.rows) {
        std::printf("%-15s %-10.4f %-10.6f %-10.5g %-10.5g\n", r.label.c_str(), r.psnr_db, r.ssim,
                    r.mean_vx, r.mean_vy);
      }
      std::printf("%-15s %-10s %-10s %-10.5g %-10.5g\n", "HR", "-", "-", result.hr_mean_vx,
                  result.hr_mean_vy);
      return 0;
    }
    if (*ls) return run_loss(ls_a, ls_b, ls_name, ls_n, ls_lambda, ls_grad);
    if (*gm) return run_gvmap(gm_img, gm_n, gm_prefix);
    if (*av) return run_analyze(av_hr, av_sr, av_n, av_out);
  } catch (const gvl::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const gvl::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const gvl::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
