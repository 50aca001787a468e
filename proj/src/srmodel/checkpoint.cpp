#include "gvl/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gvl/errors.hpp"

namespace gvl {

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    put(bits, 8);
  }
  void bytes(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::vector<char>& buffer() const { return buf_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(std::vector<char> data, std::string name) : data_(std::move(data)), name_(std::move(name)) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() {
    const std::uint64_t bits = get(8);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
  void bytes(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > data_.size()) throw IoError("checkpoint '" + name_ + "' is truncated");
  }
  std::uint64_t get(int n) {
    need(n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return v;
  }
  std::vector<char> data_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  params.spec.validate();
  Writer w;
  w.bytes(kCheckpointMagic, sizeof kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(params.spec.channels));
  w.u32(static_cast<std::uint32_t>(params.spec.scale));
  w.u32(static_cast<std::uint32_t>(params.spec.layers.size()));
  for (const auto& l : params.spec.layers) {
    w.u32(static_cast<std::uint32_t>(l.in_ch));
    w.u32(static_cast<std::uint32_t>(l.out_ch));
    w.u32(static_cast<std::uint32_t>(l.kernel));
    w.u32(static_cast<std::uint32_t>(l.act));
  }
  w.u64(params.adam.step);
  w.u64(params.values.size());
  for (Real v : params.values) w.f64(v);
  for (Real v : params.adam.m) w.f64(v);
  for (Real v : params.adam.v) w.f64(v);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
  out.close();
  if (!out) throw IoError("failed writing checkpoint '" + path.string() + "'");
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint '" + path.string() + "'");
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r(std::move(data), path.string());

  char magic[8];
  r.bytes(magic, 8);
  if (std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw IoError("'" + path.string() + "' is not a checkpoint (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw IoError("checkpoint '" + path.string() + "' has unsupported version " +
                  std::to_string(version));
  }
  ModelSpec spec;
  spec.channels = static_cast<int>(r.u32());
  spec.scale = static_cast<int>(r.u32());
  const std::uint32_t layers = r.u32();
  if (layers == 0 || layers > 1024) throw IoError("checkpoint: implausible layer count");
  for (std::uint32_t i = 0; i < layers; ++i) {
    ConvSpec l;
    l.in_ch = static_cast<int>(r.u32());
    l.out_ch = static_cast<int>(r.u32());
    l.kernel = static_cast<int>(r.u32());
    const std::uint32_t act = r.u32();
    if (act > 2) throw IoError("checkpoint: unknown activation code");
    l.act = static_cast<Activation>(act);
    spec.layers.push_back(l);
  }
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw IoError("checkpoint '" + path.string() + "' has an invalid model spec: " + e.what());
  }
  ModelParams p = ModelParams::zeros(spec);
  p.adam.step = r.u64();
  const std::uint64_t count = r.u64();
  if (count != p.values.size()) throw IoError("checkpoint: parameter count mismatch");
  for (auto& v : p.values) v = static_cast<Real>(r.f64());
  for (auto& v : p.adam.m) v = static_cast<Real>(r.f64());
  for (auto& v : p.adam.v) v = static_cast<Real>(r.f64());
  if (!r.at_end()) throw IoError("checkpoint '" + path.string() + "' has trailing bytes");
  return p;
}

}  // namespace gvl
