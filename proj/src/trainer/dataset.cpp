#include <algorithm>
#include <iostream>

#include "gvl/errors.hpp"
#include "gvl/png_io.hpp"
#include "gvl/trainer.hpp"

namespace gvl {

Dataset load_dataset(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("dataset directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  Dataset ds;
  for (const auto& f : files) {
    try {
      ds.images.push_back({f, load_png(f)});
    } catch (const IoError& e) {
      ds.skipped.push_back(f.string() + ": " + e.what());
      std::cerr << "warning: skipping " << f.string() << ": " << e.what() << '\n';
    }
  }
  return ds;
}

TrainSplit prepare_data(const TrainConfig& config) {
  std::filesystem::path data_dir = config.data_dir;
  if (data_dir.empty()) {
    data_dir = config.out_dir.empty()
                   ? std::filesystem::temp_directory_path() /
                         ("gvl_synth_" + std::to_string(config.seed) + "_" +
                          std::to_string(config.synthetic_count) + "_" +
                          std::to_string(config.synthetic_size))
                   : config.out_dir / "data";
    SyntheticSetSpec spec;
    spec.count = config.synthetic_count;
    spec.height = spec.width = config.synthetic_size;
    spec.seed = config.seed;
    make_synthetic_dataset(spec, data_dir);
  }

  TrainSplit split;
  Dataset all = load_dataset(data_dir);
  if (!config.val_dir.empty()) {
    split.train = std::move(all.images);
    split.val = load_dataset(config.val_dir).images;
  } else {
    const int total = static_cast<int>(all.images.size());
    const int nval = std::min(config.val_count, total);
    split.train.assign(std::make_move_iterator(all.images.begin()),
                       std::make_move_iterator(all.images.end() - nval));
    split.val.assign(std::make_move_iterator(all.images.end() - nval),
                     std::make_move_iterator(all.images.end()));
  }
  return split;
}

}  // namespace gvl
