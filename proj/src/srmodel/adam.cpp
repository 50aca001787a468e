#include <cmath>
#include <string>

#include "gvl/errors.hpp"
#include "gvl/model.hpp"

namespace gvl {

void adam_step(ModelParams& params, const ParamGrads& grads, const AdamConfig& config) {
  const std::size_t n = params.values.size();
  if (grads.values.size() != n || params.adam.m.size() != n || params.adam.v.size() != n) {
    throw ValidationError("adam_step: gradient/state size does not match parameters");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grads.values[i])) {
      throw NumericError("adam_step: non-finite gradient at parameter " + std::to_string(i));
    }
  }
  auto& st = params.adam;
  ++st.step;
  const double t = static_cast<double>(st.step);
  const Real bc1 = static_cast<Real>(1 - std::pow(static_cast<double>(config.beta1), t));
  const Real bc2 = static_cast<Real>(1 - std::pow(static_cast<double>(config.beta2), t));
  for (std::size_t i = 0; i < n; ++i) {
    const Real g = grads.values[i];
    st.m[i] = config.beta1 * st.m[i] + (1 - config.beta1) * g;
    st.v[i] = config.beta2 * st.v[i] + (1 - config.beta2) * g * g;
    const Real m_hat = st.m[i] / bc1;
    const Real v_hat = st.v[i] / bc2;
    params.values[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

}  // namespace gvl
