#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

#include "gvl/checkpoint.hpp"
#include "gvl/errors.hpp"
#include "gvl/metrics.hpp"
#include "gvl/patches.hpp"
#include "gvl/resample.hpp"
#include "gvl/rng.hpp"
#include "gvl/trainer.hpp"

namespace gvl {

namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kSampleStream = 2;

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

}  // namespace

EpochReport validate_model(const ModelParams& params, const std::vector<LoadedImage>& val,
                           const TrainConfig& config) {
  EpochReport rep;
  if (val.empty()) return rep;
  const int n = config.loss.gv_patch;
  double mse = 0, ps = 0, ss = 0, vx = 0, vy = 0;
  for (const auto& item : val) {
    const Image hr = center_crop(item.image, config.crop_size, config.crop_size);
    const Image sr = clamped(forward(params, make_lr(hr, config.scale)).sr);
    const double p = psnr(sr, hr, config.scale);
    ps += p;
    mse += std::pow(10.0, -p / 10.0);
    ss += ssim(sr, hr);
    const auto prof = variance_profile(sr, n);
    vx += prof.mean_vx();
    vy += prof.mean_vy();
  }
  const double count = static_cast<double>(val.size());
  rep.val_mse = mse / count;
  rep.val_psnr_db = ps / count;
  rep.val_ssim = ss / count;
  rep.val_mean_vx = vx / count;
  rep.val_mean_vy = vy / count;
  return rep;
}

void write_epoch_csv(const std::vector<EpochReport>& reports, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "epoch,train_loss,val_mse,val_psnr_db,val_ssim,val_mean_vx,val_mean_vy\n";
  for (const auto& r : reports) {
    out << r.epoch << ',' << format_number(r.train_loss, 12) << ','
        << format_number(r.val_mse, 12) << ',' << format_number(r.val_psnr_db, 12) << ','
        << format_number(r.val_ssim, 12) << ',' << format_number(r.val_mean_vx, 12) << ','
        << format_number(r.val_mean_vy, 12) << '\n';
  }
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

TrainResult train(const TrainConfig& config, const TrainSplit& data) {
  config.validate();
  if (config.epochs > 0 && data.train.empty()) {
    throw ValidationError("train: training set is empty");
  }
  for (const auto& item : data.train) {
    if (item.image.height() < config.crop_size || item.image.width() < config.crop_size) {
      throw ValidationError("train: image '" + item.path.string() + "' is smaller than crop_size");
    }
  }
  const int channels = data.train.empty() ? 3 : data.train.front().image.channels();
  for (const auto& item : data.train) {
    if (item.image.channels() != channels) {
      throw ValidationError("train: mixed channel counts in training set");
    }
  }

  const ModelSpec spec = ModelSpec::espcn(channels, config.scale, config.features);
  TrainResult result;
  result.params = ModelParams::init(spec, derive_seed(config.seed, kInitStream));
  result.init_checksum = result.params.checksum();

  if (!config.out_dir.empty()) {
    ensure_dir(config.out_dir);
    write_run_manifest(config, config.out_dir);
  }
  if (config.epochs == 0) {
    if (!config.out_dir.empty()) {
      save_checkpoint(result.params, config.out_dir / "checkpoint.bin");
      write_epoch_csv({}, config.out_dir / "epochs.csv");
    }
    return result;
  }

  result.initial = validate_model(result.params, data.val, config);
  Rng rng(derive_seed(config.seed, kSampleStream));
  const AdamConfig adam{config.learning_rate};
  std::vector<int> order(data.train.size());

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    double loss_sum = 0;
    std::size_t samples = 0;

    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const Real inv_batch = Real(1) / static_cast<Real>(end - start);
      ParamGrads total{std::vector<Real>(result.params.values.size(), 0)};
      double batch_loss = 0;
      for (std::size_t b = start; b < end; ++b) {
        const Image& full = data.train[order[b]].image;
        const int y0 = rng.uniform_int(0, full.height() - config.crop_size);
        const int x0 = rng.uniform_int(0, full.width() - config.crop_size);
        const Image hr = crop(full, y0, x0, config.crop_size, config.crop_size);
        auto fwd = forward(result.params, make_lr(hr, config.scale));
        const LossResult loss = composite_loss(config.loss, fwd.sr, hr);
        if (!std::isfinite(loss.value)) {
          if (!config.out_dir.empty()) {
            save_checkpoint(result.params, config.out_dir / "checkpoint_last_good.bin");
          }
          throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));
        }
        const ParamGrads g = backward(result.params, fwd.tape, loss.grad_sr);
        for (std::size_t i = 0; i < g.values.size(); ++i) total.values[i] += inv_batch * g.values[i];
        batch_loss += loss.value;
      }
      try {
        adam_step(result.params, total, adam);
      } catch (const NumericError&) {
        if (!config.out_dir.empty()) {
          save_checkpoint(result.params, config.out_dir / "checkpoint_last_good.bin");
        }
        throw;
      }
      loss_sum += batch_loss;
      samples += end - start;
    }

    EpochReport rep = validate_model(result.params, data.val, config);
    rep.epoch = epoch;
    rep.train_loss = loss_sum / static_cast<double>(samples);
    result.epochs.push_back(rep);
    if (config.verbose) {
      std::cerr << config.loss.label() << " epoch " << epoch << " loss "
                << format_number(rep.train_loss, 6) << " val psnr "
                << format_number(rep.val_psnr_db, 5) << " ssim " << format_number(rep.val_ssim, 5)
                << '\n';
    }
  }

  if (!config.out_dir.empty()) {
    save_checkpoint(result.params, config.out_dir / "checkpoint.bin");
    std::vector<EpochReport> rows{result.initial};
    rows.insert(rows.end(), result.epochs.begin(), result.epochs.end());
    write_epoch_csv(rows, config.out_dir / "epochs.csv");
  }
  return result;
}

TrainResult train(const TrainConfig& config) {
  config.validate();
  return train(config, prepare_data(config));
}

}  // namespace gvl
