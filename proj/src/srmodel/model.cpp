#include "gvl/model.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "gvl/errors.hpp"
#include "gvl/rng.hpp"

namespace gvl {

std::string to_string(Activation act) {
  switch (act) {
    case Activation::kNone: return "none";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  return "?";
}

ModelSpec ModelSpec::espcn(int channels, int scale, int features) {
  ModelSpec spec;
  spec.channels = channels;
  spec.scale = scale;
  spec.layers = {
      {channels, features, 5, Activation::kTanh},
      {features, features, 3, Activation::kTanh},
      {features, channels * scale * scale, 3, Activation::kNone},
  };
  return spec;
}

void ModelSpec::validate() const {
  if (channels < 1) throw ValidationError("model: channels must be >= 1");
  if (scale < 1) throw ValidationError("model: scale must be >= 1");
  if (layers.empty()) throw ValidationError("model: at least one layer required");
  int prev = channels;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.kernel < 1 || l.kernel % 2 == 0) {
      throw ValidationError("model: layer " + std::to_string(i) + " kernel must be odd");
    }
    if (l.in_ch != prev || l.out_ch < 1) {
      throw ValidationError("model: layer " + std::to_string(i) + " channel mismatch");
    }
    prev = l.out_ch;
  }
  if (prev != channels * scale * scale) {
    throw ValidationError("model: last layer must output channels * scale^2 maps");
  }
}

std::size_t ModelSpec::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.param_count();
  return n;
}

std::size_t ModelParams::weight_offset(int layer) const {
  std::size_t off = 0;
  for (int i = 0; i < layer; ++i) off += spec.layers[i].param_count();
  return off;
}

std::size_t ModelParams::bias_offset(int layer) const {
  return weight_offset(layer) + spec.layers[layer].weight_count();
}

ModelParams ModelParams::zeros(const ModelSpec& spec) {
  spec.validate();
  ModelParams p;
  p.spec = spec;
  p.values.assign(spec.param_count(), 0);
  p.adam.m.assign(p.values.size(), 0);
  p.adam.v.assign(p.values.size(), 0);
  return p;
}

ModelParams ModelParams::init(const ModelSpec& spec, std::uint64_t seed) {
  ModelParams p = zeros(spec);
  Rng rng(seed);
  std::size_t off = 0;
  for (const auto& l : spec.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.in_ch) * l.kernel * l.kernel);
    for (std::size_t i = 0; i < l.param_count(); ++i) {
      p.values[off + i] = static_cast<Real>(rng.uniform(-bound, bound));
    }
    off += l.param_count();
  }
  return p;
}

std::uint64_t ModelParams::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  for (Real v : values) {
    unsigned char bytes[sizeof(Real)];
    std::memcpy(bytes, &v, sizeof(Real));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  return h;
}

void ForwardTape::clear() {
  padded_inputs.clear();
  outputs.clear();
  param_count = 0;
}

namespace {

void apply_activation(Activation act, Image& x) {
  switch (act) {
    case Activation::kNone: break;
    case Activation::kTanh:
      for (Real& v : x.data()) v = std::tanh(v);
      break;
    case Activation::kRelu:
      for (Real& v : x.data()) v = v > 0 ? v : 0;
      break;
  }
}

// Multiplies grad by the activation derivative, expressed via its output.
void activation_backward(Activation act, const Image& out, Image& grad) {
  auto g = grad.data();
  auto o = out.data();
  switch (act) {
    case Activation::kNone: break;
    case Activation::kTanh:
      for (std::size_t i = 0; i < g.size(); ++i) g[i] *= 1 - o[i] * o[i];
      break;
    case Activation::kRelu:
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = o[i] > 0 ? g[i] : 0;
      break;
  }
}

}  // namespace

ForwardResult forward(const ModelParams& params, const Image& lr) {
  const ModelSpec& spec = params.spec;
  if (params.values.size() != spec.param_count()) {
    throw ValidationError("forward: parameter count does not match model spec");
  }
  if (lr.channels() != spec.layers.front().in_ch) {
    throw ValidationError("forward: input has " + std::to_string(lr.channels()) +
                          " channels, model expects " +
                          std::to_string(spec.layers.front().in_ch));
  }
  ForwardResult res;
  res.tape.step = params.adam.step;
  res.tape.param_count = params.values.size();
  res.tape.lr_height = lr.height();
  res.tape.lr_width = lr.width();

  const Image* x = &lr;
  std::size_t off = 0;
  for (const auto& l : spec.layers) {
    res.tape.padded_inputs.push_back(pad_replicate(*x, (l.kernel - 1) / 2));
    Image y = conv_forward(l, params.values.data() + off,
                           params.values.data() + off + l.weight_count(),
                           res.tape.padded_inputs.back());
    apply_activation(l.act, y);
    res.tape.outputs.push_back(std::move(y));
    x = &res.tape.outputs.back();
    off += l.param_count();
  }
  res.sr = pixel_shuffle(res.tape.outputs.back(), spec.scale);
  return res;
}

ParamGrads backward(const ModelParams& params, const ForwardTape& tape, const Image& grad_sr) {
  const ModelSpec& spec = params.spec;
  const std::size_t layers = spec.layers.size();
  if (tape.empty() || tape.outputs.size() != layers || tape.param_count != params.values.size() ||
      tape.step != params.adam.step) {
    throw ValidationError("backward: tape does not come from a forward pass on these parameters");
  }
  if (grad_sr.channels() != spec.channels || grad_sr.height() != tape.lr_height * spec.scale ||
      grad_sr.width() != tape.lr_width * spec.scale) {
    throw ValidationError("backward: cotangent shape does not match the SR output");
  }

  ParamGrads grads{std::vector<Real>(params.values.size(), 0)};
  Image grad = pixel_unshuffle(grad_sr, spec.scale);
  for (std::size_t li = layers; li-- > 0;) {
    const auto& l = spec.layers[li];
    const std::size_t w_off = params.weight_offset(static_cast<int>(li));
    activation_backward(l.act, tape.outputs[li], grad);
    Image grad_padded;
    conv_backward(l, params.values.data() + w_off, tape.padded_inputs[li], grad,
                  grads.values.data() + w_off, grads.values.data() + w_off + l.weight_count(),
                  li > 0 ? &grad_padded : nullptr);
    if (li > 0) grad = pad_replicate_backward(grad_padded, (l.kernel - 1) / 2);
  }
  return grads;
}

}  // namespace gvl
