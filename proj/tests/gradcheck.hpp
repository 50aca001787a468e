#pragma once

// Finite-difference gradient checks shared by the unit and acceptance suites.

#include <string>
#include <vector>

#include "gvl/losses.hpp"
#include "gvl/model.hpp"
#include "oracles.hpp"

namespace gradcheck {

enum class LossKind { kL2, kL1, kTv, kSsim, kGv };

inline std::string name(LossKind k) {
  switch (k) {
    case LossKind::kL2: return "L2";
    case LossKind::kL1: return "L1";
    case LossKind::kTv: return "TV";
    case LossKind::kSsim: return "SSIM";
    case LossKind::kGv: return "GV";
  }
  return "?";
}

inline gvl::LossResult eval(LossKind k, const gvl::Image& sr, const gvl::Image& hr) {
  switch (k) {
    case LossKind::kL2: return gvl::l2_loss(sr, hr);
    case LossKind::kL1: return gvl::l1_loss(sr, hr);
    case LossKind::kTv: return gvl::tv_loss(sr);
    case LossKind::kSsim: return gvl::ssim_loss(sr, hr);
    case LossKind::kGv: return gvl::gv_loss(sr, hr, 8);
  }
  return {};
}

/// Max relative error of one random 3x24x24 instance (eps = 1e-5).
inline double loss_instance(LossKind k, gvl::Rng& rng) {
  const gvl::Image hr = oracle::random_image(rng, 3, 24, 24);
  gvl::Image sr = oracle::random_image(rng, 3, 24, 24);
  if (k == LossKind::kL1) {
    // Keep every residual away from the kink so central differences are valid.
    for (std::size_t i = 0; i < sr.size(); ++i) {
      double& v = sr.data()[i];
      const double d = v - hr.data()[i];
      if (std::abs(d) < 1e-3) v = hr.data()[i] + (d < 0 ? -1e-3 : 1e-3);
    }
  }
  const auto analytic = eval(k, sr, hr);
  auto f = [&](const gvl::Image& x) { return static_cast<double>(eval(k, x, hr).value); };
  const gvl::Image numeric = oracle::fd_gradient(f, sr, 1e-5);
  return oracle::max_rel_error(analytic.grad_sr.data(), numeric.data());
}

/// Two-layer, four-feature network on an 8x8 input, s = 2.
inline gvl::ModelSpec tiny_spec() {
  gvl::ModelSpec spec;
  spec.channels = 3;
  spec.scale = 2;
  spec.layers = {{3, 4, 3, gvl::Activation::kTanh}, {4, 12, 3, gvl::Activation::kNone}};
  return spec;
}

/// Max relative error of d loss(forward(params, lr), hr) / d params.
inline double model_instance(const gvl::CompositeLossSpec& loss, gvl::Rng& rng,
                             const gvl::ModelSpec& spec = tiny_spec()) {
  gvl::ModelParams params = gvl::ModelParams::init(spec, rng.next());
  // Larger weights so every layer is well away from the linear regime.
  for (auto& v : params.values) v *= 2;
  const gvl::Image lr = oracle::random_image(rng, spec.channels, 8, 8);
  const gvl::Image hr = oracle::random_image(rng, spec.channels, 8 * spec.scale, 8 * spec.scale);

  const auto fwd = gvl::forward(params, lr);
  const auto loss_res = gvl::composite_loss(loss, fwd.sr, hr);
  const auto grads = gvl::backward(params, fwd.tape, loss_res.grad_sr);

  const double eps = 1e-5;
  std::vector<double> numeric(params.values.size());
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    const gvl::Real orig = params.values[i];
    params.values[i] = orig + eps;
    const double fp = gvl::composite_loss(loss, gvl::forward(params, lr).sr, hr).value;
    params.values[i] = orig - eps;
    const double fm = gvl::composite_loss(loss, gvl::forward(params, lr).sr, hr).value;
    params.values[i] = orig;
    numeric[i] = (fp - fm) / (2 * eps);
  }
  return oracle::max_rel_error(grads.values, numeric);
}

inline std::vector<gvl::CompositeLossSpec> model_losses() {
  std::vector<gvl::CompositeLossSpec> out;
  for (const char* label : {"L2", "L2+GV", "L2+TV", "SSIM", "SSIM+GV"}) {
    out.push_back(gvl::parse_loss_label(label, 0.5, 8));
  }
  return out;
}

}  // namespace gradcheck
