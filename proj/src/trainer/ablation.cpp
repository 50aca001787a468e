#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "gvl/errors.hpp"
#include "gvl/trainer.hpp"

namespace gvl {

std::vector<CompositeLossSpec> loss_grid(Real reg_weight, int gv_patch) {
  std::vector<CompositeLossSpec> grid;
  for (BaseLoss base : {BaseLoss::kL2, BaseLoss::kL1, BaseLoss::kSsim})
    for (Regularizer reg : {Regularizer::kNone, Regularizer::kTv, Regularizer::kGv}) {
      CompositeLossSpec spec;
      spec.base = base;
      spec.regularizer = reg;
      spec.reg_weight = reg_weight;
      spec.gv_patch = gv_patch;
      grid.push_back(spec);
    }
  return grid;
}

TrainConfig desk_preset() {
  TrainConfig c;
  c.seed = 1;
  c.scale = 2;
  c.loss.gv_patch = default_gv_patch(2);
  c.loss.reg_weight = 1;
  c.epochs = 30;
  c.batch_size = 8;
  c.crop_size = 64;
  c.learning_rate = Real(1e-3);
  c.synthetic_count = 200;
  c.synthetic_size = 96;
  c.val_count = 40;
  return c;
}

void write_ablation_csv(const std::vector<AblationRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "loss,psnr_db,ssim,mean_vx,mean_vy,init_checksum\n";
  for (const auto& r : rows) {
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.init_checksum));
    out << r.label << ',' << format_number(r.psnr_db) << ',' << format_number(r.ssim) << ','
        << format_number(r.mean_vx) << ',' << format_number(r.mean_vy) << ',' << hex << '\n';
  }
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

AblationResult ablation(const TrainConfig& base, const std::vector<CompositeLossSpec>& grid,
                        int threads) {
  if (grid.empty()) throw ValidationError("ablation: loss grid is empty");
  for (const auto& spec : grid) {
    TrainConfig c = base;
    c.loss = spec;
    c.validate();
  }
  const TrainSplit data = prepare_data(base);
  if (data.val.empty()) throw ValidationError("ablation: validation split is empty");

  EvalOptions eval_opts;
  eval_opts.scale = base.scale;
  eval_opts.gv_patch = base.loss.gv_patch;

  AblationResult result;
  const EvalResult reference = evaluate(bicubic_upscaler(base.scale), data.val, eval_opts);
  result.hr_mean_vx = reference.hr_mean_vx;
  result.hr_mean_vy = reference.hr_mean_vy;

  if (!base.out_dir.empty()) {
    std::filesystem::create_directories(base.out_dir);
    const auto path = base.out_dir / "variance_reference.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "source,psnr_db,ssim,mean_vx,mean_vy\n"
        << "HR,inf,1," << format_number(reference.hr_mean_vx) << ','
        << format_number(reference.hr_mean_vy) << '\n'
        << "bicubic," << format_number(reference.report.mean_psnr_db) << ','
        << format_number(reference.report.mean_ssim) << ','
        << format_number(reference.sr_mean_vx) << ',' << format_number(reference.sr_mean_vy)
        << '\n';
  }

  std::vector<std::optional<AblationRow>> rows(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  std::mutex mu;
  std::atomic<std::size_t> next{0};

  auto flush_table = [&] {
    if (base.out_dir.empty()) return;
    std::vector<AblationRow> done;
    for (const auto& r : rows) {
      if (r) done.push_back(*r);
    }
    write_ablation_csv(done, base.out_dir / "table.csv");
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        TrainConfig c = base;
        c.loss = grid[i];
        if (!base.out_dir.empty()) c.out_dir = base.out_dir / grid[i].label();
        const TrainResult tr = train(c, data);
        EvalOptions opts = eval_opts;
        if (!c.out_dir.empty()) opts.out_dir = c.out_dir / "eval";
        const EvalResult ev = evaluate(model_upscaler(tr.params), data.val, opts);
        AblationRow row{grid[i].label(), ev.report.mean_psnr_db, ev.report.mean_ssim,
                        ev.sr_mean_vx, ev.sr_mean_vy, tr.init_checksum};
        std::lock_guard lock(mu);
        rows[i] = row;
        flush_table();
        if (base.verbose) {
          std::cerr << "finished " << row.label << ": psnr " << format_number(row.psnr_db, 6)
                    << " ssim " << format_number(row.ssim, 6) << '\n';
        }
      } catch (...) {
        std::lock_guard lock(mu);
        errors[i] = std::current_exception();
      }
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& r : rows) result.rows.push_back(*r);
  return result;
}

}  // namespace gvl
