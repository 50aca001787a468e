#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gvl/image.hpp"

namespace gvl {

enum class Activation { kNone = 0, kTanh = 1, kRelu = 2 };

std::string to_string(Activation act);

/// One convolution with odd square kernel and replicate padding of
/// (kernel - 1) / 2, so spatial size is preserved.
struct ConvSpec {
  int in_ch = 0;
  int out_ch = 0;
  int kernel = 3;
  Activation act = Activation::kNone;

  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_ch) * in_ch * kernel * kernel;
  }
  std::size_t param_count() const { return weight_count() + out_ch; }

  friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

/// Conv stack followed by pixel_shuffle(scale). The last layer must emit
/// channels * scale^2 feature maps.
struct ModelSpec {
  int channels = 3;
  int scale = 2;
  std::vector<ConvSpec> layers;

  /// conv c->32 (5x5, tanh), conv 32->32 (3x3, tanh), conv 32->c*s^2 (3x3).
  static ModelSpec espcn(int channels, int scale, int features = 32);

  void validate() const;
  std::size_t param_count() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Adam moments and step counter, laid out like ModelParams::values.
struct AdamState {
  std::vector<Real> m;
  std::vector<Real> v;
  std::uint64_t step = 0;
};

/// All layer parameters in one flat vector: for each layer, its weights
/// (out x in x k x k) followed by its biases.
struct ModelParams {
  ModelSpec spec;
  std::vector<Real> values;
  AdamState adam;

  /// Offsets of each layer's weights and biases into `values`.
  std::size_t weight_offset(int layer) const;
  std::size_t bias_offset(int layer) const;

  /// Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)) from `seed`.
  static ModelParams init(const ModelSpec& spec, std::uint64_t seed);
  /// All parameters zero.
  static ModelParams zeros(const ModelSpec& spec);

  /// FNV-1a over the raw parameter bytes.
  std::uint64_t checksum() const;
};

/// Parameter gradients in the same layout as ModelParams::values.
struct ParamGrads {
  std::vector<Real> values;
};

/// Cached activations for backward().
struct ForwardTape {
  std::uint64_t step = 0;  // params.adam.step at forward time
  std::size_t param_count = 0;
  int lr_height = 0;
  int lr_width = 0;
  std::vector<Image> padded_inputs;  // per layer, replicate-padded input
  std::vector<Image> outputs;        // per layer, post-activation output

  void clear();
  bool empty() const { return outputs.empty(); }
};

struct ForwardResult {
  Image sr;
  ForwardTape tape;
};

// Building blocks (exposed for testing).
Image pad_replicate(const Image& in, int pad);
Image pad_replicate_backward(const Image& grad_padded, int pad);
Image conv_forward(const ConvSpec& spec, const Real* weights, const Real* bias,
                   const Image& padded);
void conv_backward(const ConvSpec& spec, const Real* weights, const Image& padded,
                   const Image& grad_out, Real* grad_weights, Real* grad_bias,
                   Image* grad_padded);

/// Rearranges (c*s^2, h, w) into (c, s*h, s*w): channel c*s^2 + dy*s + dx
/// lands at (s*y + dy, s*x + dx).
Image pixel_shuffle(const Image& t, int s);
/// Inverse of pixel_shuffle; also its adjoint.
Image pixel_unshuffle(const Image& t, int s);

/// LR image (c, h, w) -> SR image (c, s*h, s*w).
ForwardResult forward(const ModelParams& params, const Image& lr);

/// Parameter gradients given d loss / d sr. The tape must come from
/// forward() on the same params.
ParamGrads backward(const ModelParams& params, const ForwardTape& tape, const Image& grad_sr);

struct AdamConfig {
  Real learning_rate = Real(1e-3);
  Real beta1 = Real(0.9);
  Real beta2 = Real(0.999);
  Real epsilon = Real(1e-8);
};

/// One bias-corrected Adam update; increments params.adam.step.
/// Throws NumericError on non-finite gradients (params untouched).
void adam_step(ModelParams& params, const ParamGrads& grads, const AdamConfig& config = {});

}  // namespace gvl
