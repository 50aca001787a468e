#include <fstream>
#include <sstream>

#include "gvl/errors.hpp"
#include "gvl/trainer.hpp"

namespace gvl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) {
    throw ValidationError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) {
    throw ValidationError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

}  // namespace

int default_gv_patch(int scale) { return scale <= 2 ? 8 : 16; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over (seed, stream).
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void TrainConfig::validate() const {
  loss.validate();
  if (scale < 2) throw ValidationError("config: scale must be >= 2");
  if (epochs < 0) throw ValidationError("config: epochs must be >= 0");
  if (batch_size < 1) throw ValidationError("config: batch_size must be >= 1");
  if (crop_size % scale != 0) {
    throw ValidationError("config: crop_size must be divisible by scale");
  }
  if (loss.regularizer == Regularizer::kGv && crop_size % loss.gv_patch != 0) {
    throw ValidationError("config: crop_size must be divisible by gv_patch");
  }
  if (loss.base == BaseLoss::kSsim && crop_size < 11) {
    throw ValidationError("config: SSIM loss needs crop_size >= 11");
  }
  if (crop_size < 3 * scale) throw ValidationError("config: crop_size too small");
  if (!(learning_rate > 0)) throw ValidationError("config: learning_rate must be > 0");
  if (features < 1) throw ValidationError("config: features must be >= 1");
  if (val_count < 0) throw ValidationError("config: val_count must be >= 0");
  if (synthetic_count < 0) throw ValidationError("config: synthetic_count must be >= 0");
}

void apply_config_value(TrainConfig& c, const std::string& key, const std::string& value) {
  if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(to_int(key, value));
  } else if (key == "scale") {
    c.scale = static_cast<int>(to_int(key, value));
  } else if (key == "gv_patch") {
    c.loss.gv_patch = static_cast<int>(to_int(key, value));
  } else if (key == "base_loss") {
    c.loss.base = parse_base_loss(value);
  } else if (key == "regularizer") {
    c.loss.regularizer = parse_regularizer(value);
  } else if (key == "loss") {
    const auto spec = parse_loss_label(value, c.loss.reg_weight, c.loss.gv_patch);
    c.loss.base = spec.base;
    c.loss.regularizer = spec.regularizer;
  } else if (key == "reg_weight" || key == "lambda") {
    c.loss.reg_weight = static_cast<Real>(to_real(key, value));
  } else if (key == "gv_norm") {
    if (value == "mse") {
      c.loss.gv_norm = GvNorm::kMeanSquared;
    } else if (value == "l2") {
      c.loss.gv_norm = GvNorm::kEuclidean;
    } else {
      throw ValidationError("config: gv_norm must be 'mse' or 'l2'");
    }
  } else if (key == "epochs") {
    c.epochs = static_cast<int>(to_int(key, value));
  } else if (key == "batch_size") {
    c.batch_size = static_cast<int>(to_int(key, value));
  } else if (key == "crop_size") {
    c.crop_size = static_cast<int>(to_int(key, value));
  } else if (key == "learning_rate") {
    c.learning_rate = static_cast<Real>(to_real(key, value));
  } else if (key == "features") {
    c.features = static_cast<int>(to_int(key, value));
  } else if (key == "data_dir") {
    c.data_dir = value;
  } else if (key == "val_dir") {
    c.val_dir = value;
  } else if (key == "val_count") {
    c.val_count = static_cast<int>(to_int(key, value));
  } else if (key == "synthetic_count") {
    c.synthetic_count = static_cast<int>(to_int(key, value));
  } else if (key == "synthetic_size") {
    c.synthetic_size = static_cast<int>(to_int(key, value));
  } else if (key == "out_dir") {
    c.out_dir = value;
  } else if (key == "version") {
    // written by manifests; informational
  } else {
    throw ValidationError("config: unknown key '" + key + "'");
  }
}

void apply_config_text(TrainConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_config_file(TrainConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(config, ss.str());
}

std::string config_to_text(const TrainConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "version = " << GVL_VERSION << '\n'
      << "seed = " << c.seed << '\n'
      << "scale = " << c.scale << '\n'
      << "base_loss = " << to_string(c.loss.base) << '\n'
      << "regularizer = " << to_string(c.loss.regularizer) << '\n'
      << "reg_weight = " << c.loss.reg_weight << '\n'
      << "gv_patch = " << c.loss.gv_patch << '\n'
      << "gv_norm = " << (c.loss.gv_norm == GvNorm::kMeanSquared ? "mse" : "l2") << '\n'
      << "epochs = " << c.epochs << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "crop_size = " << c.crop_size << '\n'
      << "learning_rate = " << c.learning_rate << '\n'
      << "features = " << c.features << '\n'
      << "data_dir = " << c.data_dir.string() << '\n'
      << "val_dir = " << c.val_dir.string() << '\n'
      << "val_count = " << c.val_count << '\n'
      << "synthetic_count = " << c.synthetic_count << '\n'
      << "synthetic_size = " << c.synthetic_size << '\n'
      << "out_dir = " << c.out_dir.string() << '\n';
  return out.str();
}

void write_run_manifest(const TrainConfig& config, const std::filesystem::path& dir) {
  const auto path = dir / "manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "# resolved run configuration\n" << config_to_text(config);
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gvl
