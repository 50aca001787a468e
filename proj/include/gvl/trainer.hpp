#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gvl/image.hpp"
#include "gvl/losses.hpp"
#include "gvl/metrics.hpp"
#include "gvl/model.hpp"
#include "gvl/synthetic.hpp"

namespace gvl {

/// GV patch size tied to the scale factor: 8 for 2x, 16 for 3x and 4x.
int default_gv_patch(int scale);

struct TrainConfig {
  std::uint64_t seed = 1;
  int scale = 2;
  CompositeLossSpec loss;  // loss.gv_patch is the GV patch size n
  int epochs = 30;
  int batch_size = 8;
  int crop_size = 64;  // HR-space training crop
  Real learning_rate = Real(1e-3);
  int features = 32;

  std::filesystem::path data_dir;  // HR PNGs; empty -> synthetic set
  std::filesystem::path val_dir;   // empty -> last val_count images of data_dir
  int val_count = 40;
  int synthetic_count = 200;
  int synthetic_size = 96;

  std::filesystem::path out_dir;  // empty -> nothing written
  bool verbose = false;

  /// Throws ValidationError on inconsistent values.
  void validate() const;
};

/// Parses "key = value" lines ('#' starts a comment) onto `config`.
/// Unknown keys are rejected.
void apply_config_text(TrainConfig& config, const std::string& text);
void apply_config_file(TrainConfig& config, const std::filesystem::path& path);
/// Applies a single key/value pair.
void apply_config_value(TrainConfig& config, const std::string& key, const std::string& value);

/// Resolved config in the same key = value format, plus version line.
std::string config_to_text(const TrainConfig& config);

/// Writes manifest.txt (resolved config, seed, code version) into dir.
void write_run_manifest(const TrainConfig& config, const std::filesystem::path& dir);

/// Derives an independent stream seed from a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct LoadedImage {
  std::filesystem::path path;
  Image image;
};

struct Dataset {
  std::vector<LoadedImage> images;
  std::vector<std::string> skipped;
};

/// Loads every *.png in dir, sorted by file name. Unreadable files are
/// skipped with a message in `skipped`.
Dataset load_dataset(const std::filesystem::path& dir);

struct TrainSplit {
  std::vector<LoadedImage> train;
  std::vector<LoadedImage> val;
};

/// Resolves the config's data sources (generating the synthetic set under
/// out_dir/data or a temp location when data_dir is empty).
TrainSplit prepare_data(const TrainConfig& config);

struct EpochReport {
  int epoch = 0;  // 0 = before training
  double train_loss = 0;
  double val_mse = 0;
  double val_psnr_db = 0;
  double val_ssim = 0;
  double val_mean_vx = 0;
  double val_mean_vy = 0;
};

struct TrainResult {
  ModelParams params;
  std::uint64_t init_checksum = 0;
  EpochReport initial;
  std::vector<EpochReport> epochs;
};

/// Validation pass on deterministic centre crops of crop_size.
EpochReport validate_model(const ModelParams& params, const std::vector<LoadedImage>& val,
                           const TrainConfig& config);

/// Trains on pre-loaded data. Writes manifest.txt, epochs.csv and
/// checkpoint.bin into config.out_dir when set. On a non-finite loss the
/// last good parameters are saved as checkpoint_last_good.bin and
/// NumericError is thrown.
TrainResult train(const TrainConfig& config, const TrainSplit& data);

/// Convenience overload: prepare_data + train.
TrainResult train(const TrainConfig& config);

void write_epoch_csv(const std::vector<EpochReport>& reports, const std::filesystem::path& path);

/// LR image -> SR image.
using Upscaler = std::function<Image(const Image&)>;

Upscaler model_upscaler(const ModelParams& params);
Upscaler bicubic_upscaler(int scale);

struct EvalResult {
  MetricReport report;
  std::vector<VarianceHistogram> sr_profiles;
  std::vector<VarianceHistogram> hr_profiles;
  double sr_mean_vx = 0, sr_mean_vy = 0;
  double hr_mean_vx = 0, hr_mean_vy = 0;
};

struct EvalOptions {
  int scale = 2;
  int border = -1;  // < 0 -> scale
  int gv_patch = 8;
  std::filesystem::path out_dir;  // empty -> nothing written
};

/// For each HR image: crop to divisibility, make_lr, upscale, clamp to
/// [0,1], then PSNR / SSIM / variance profiles against the HR crop.
EvalResult evaluate(const Upscaler& upscaler, const std::vector<LoadedImage>& images,
                    const EvalOptions& options);
EvalResult evaluate(const Upscaler& upscaler, const std::filesystem::path& dir,
                    const EvalOptions& options);

struct AblationRow {
  std::string label;
  double psnr_db = 0;
  double ssim = 0;
  double mean_vx = 0;
  double mean_vy = 0;
  std::uint64_t init_checksum = 0;
};

struct AblationResult {
  std::vector<AblationRow> rows;
  double hr_mean_vx = 0;
  double hr_mean_vy = 0;
};

/// Base-loss x regularizer grid {L2, L1, SSIM} x {none, TV, GV}.
std::vector<CompositeLossSpec> loss_grid(Real reg_weight, int gv_patch);

/// The desk-scale preset: 200 synthetic 96x96 images (160/40), s = 2, n = 8,
/// crop 64, batch 8, 30 epochs, Adam 1e-3, weight 1.
TrainConfig desk_preset();

/// Trains one model per spec from the same seed and initial weights,
/// evaluates each on the validation split and writes table.csv (rewritten
/// after every finished row) plus variance_reference.csv into
/// base.out_dir. Independent rows run on up to `threads` threads.
AblationResult ablation(const TrainConfig& base, const std::vector<CompositeLossSpec>& grid,
                        int threads = 1);

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::filesystem::path& path);

}  // namespace gvl
