#include <algorithm>
#include <cctype>
#include <string>

#include "gvl/errors.hpp"
#include "gvl/losses.hpp"

namespace gvl {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

void CompositeLossSpec::validate() const {
  if (!(reg_weight >= 0)) throw ValidationError("loss spec: regularizer weight must be >= 0");
  if (gv_patch < 2) throw ValidationError("loss spec: GV patch size must be >= 2");
}

std::string CompositeLossSpec::label() const {
  std::string out = to_string(base);
  if (regularizer != Regularizer::kNone) out += "+" + to_string(regularizer);
  return out;
}

LossResult composite_loss(const CompositeLossSpec& spec, const Image& sr, const Image& hr) {
  spec.validate();
  LossResult out;
  switch (spec.base) {
    case BaseLoss::kL1: out = l1_loss(sr, hr); break;
    case BaseLoss::kL2: out = l2_loss(sr, hr); break;
    case BaseLoss::kSsim: out = ssim_loss(sr, hr); break;
  }
  if (spec.regularizer == Regularizer::kNone || spec.reg_weight == 0) return out;

  const LossResult reg = spec.regularizer == Regularizer::kTv
                             ? tv_loss(sr)
                             : gv_loss(sr, hr, spec.gv_patch, spec.gv_norm);
  out.value += spec.reg_weight * reg.value;
  auto g = out.grad_sr.data();
  auto rg = reg.grad_sr.data();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += spec.reg_weight * rg[i];
  return out;
}

BaseLoss parse_base_loss(std::string_view name) {
  const std::string s = lower(name);
  if (s == "l1") return BaseLoss::kL1;
  if (s == "l2" || s == "mse") return BaseLoss::kL2;
  if (s == "ssim") return BaseLoss::kSsim;
  throw ValidationError("unknown base loss '" + std::string(name) + "' (expected l1, l2, ssim)");
}

Regularizer parse_regularizer(std::string_view name) {
  const std::string s = lower(name);
  if (s == "none" || s.empty()) return Regularizer::kNone;
  if (s == "tv") return Regularizer::kTv;
  if (s == "gv") return Regularizer::kGv;
  throw ValidationError("unknown regularizer '" + std::string(name) +
                        "' (expected none, tv, gv)");
}

std::string to_string(BaseLoss base) {
  switch (base) {
    case BaseLoss::kL1: return "L1";
    case BaseLoss::kL2: return "L2";
    case BaseLoss::kSsim: return "SSIM";
  }
  return "?";
}

std::string to_string(Regularizer reg) {
  switch (reg) {
    case Regularizer::kNone: return "none";
    case Regularizer::kTv: return "TV";
    case Regularizer::kGv: return "GV";
  }
  return "?";
}

CompositeLossSpec parse_loss_label(std::string_view label, Real reg_weight, int gv_patch) {
  CompositeLossSpec spec;
  spec.reg_weight = reg_weight;
  spec.gv_patch = gv_patch;
  const auto plus = label.find('+');
  spec.base = parse_base_loss(label.substr(0, plus));
  spec.regularizer = plus == std::string_view::npos ? Regularizer::kNone
                                                     : parse_regularizer(label.substr(plus + 1));
  spec.validate();
  return spec;
}

}  // namespace gvl
