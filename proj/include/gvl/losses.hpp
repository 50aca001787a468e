#pragma once

#include <string>
#include <string_view>

#include "gvl/image.hpp"

namespace gvl {

/// Scalar loss and its exact gradient with respect to the SR input.
struct LossResult {
  Real value = 0;
  Image grad_sr;
};

/// Reduction applied to the difference of variance maps.
enum class GvNorm {
  kMeanSquared,  // mean over patches of squared differences (default)
  kEuclidean,    // unsquared L2 norm of the difference vector
};

/// Gradient-variance loss: gray -> Sobel -> n x n patch variances for both
/// images, then the distance between SR and HR variance maps summed over the
/// x and y axes. The HR branch carries no gradient.
LossResult gv_loss(const Image& sr, const Image& hr, int n, GvNorm norm = GvNorm::kMeanSquared);

/// Mean squared error over all samples.
LossResult l2_loss(const Image& sr, const Image& hr);

/// Mean absolute error over all samples; subgradient 0 where sr == hr.
LossResult l1_loss(const Image& sr, const Image& hr);

/// Anisotropic TV: mean squared forward difference along x plus the same
/// along y. An axis of length 1 contributes nothing. Rejects 1x1 images.
LossResult tv_loss(const Image& sr);

/// Gaussian-window SSIM parameters shared by the loss and the metric.
struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double range = 1.0;
};

/// 1 - mean SSIM on luma over all fully-covered window positions.
LossResult ssim_loss(const Image& sr, const Image& hr, const SsimParams& params = {});

/// Mean SSIM on luma, value only. Equals 1 - ssim_loss(a, b).value.
Real ssim_value(const Image& a, const Image& b, const SsimParams& params = {});

enum class BaseLoss { kL1, kL2, kSsim };
enum class Regularizer { kNone, kTv, kGv };

/// base(sr, hr) + weight * regularizer(sr[, hr]).
struct CompositeLossSpec {
  BaseLoss base = BaseLoss::kL2;
  Regularizer regularizer = Regularizer::kNone;
  Real reg_weight = 1;
  int gv_patch = 8;
  GvNorm gv_norm = GvNorm::kMeanSquared;

  /// Throws ValidationError on negative weight or patch size < 2.
  void validate() const;

  /// Short label such as "L2", "L2+GV", "SSIM+TV".
  std::string label() const;
};

LossResult composite_loss(const CompositeLossSpec& spec, const Image& sr, const Image& hr);

/// Parses "l1"/"l2"/"ssim" and "none"/"tv"/"gv" (case-insensitive).
BaseLoss parse_base_loss(std::string_view name);
Regularizer parse_regularizer(std::string_view name);
std::string to_string(BaseLoss base);
std::string to_string(Regularizer reg);

/// Parses a label like "L2+GV" back into base and regularizer.
CompositeLossSpec parse_loss_label(std::string_view label, Real reg_weight = 1, int gv_patch = 8);

}  // namespace gvl
