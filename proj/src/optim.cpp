#include "rlab/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab::optim {

void sgd_step(std::span<double> params, std::span<const double> grad, double alpha) {
  if (params.size() != grad.size()) {
    throw std::invalid_argument("sgd_step: size mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i] -= alpha * grad[i];
  }
}

AdamState make_adam_state(double alpha, double beta1, double beta2,
                          int param_count, double epsilon) {
  if (param_count < 0) {
    throw std::invalid_argument("make_adam_state: negative param count");
  }
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
    throw std::invalid_argument("make_adam_state: betas must lie in [0, 1)");
  }
  AdamState state;
  state.alpha = alpha;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.epsilon = epsilon;
  state.m.assign(static_cast<std::size_t>(param_count), 0.0);
  state.v.assign(static_cast<std::size_t>(param_count), 0.0);
  return state;
}

void adam_step(std::span<double> params, std::span<const double> grad,
               AdamState& state) {
  if (params.size() != grad.size() || params.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: size mismatch");
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= state.alpha * mhat / (std::sqrt(vhat) + state.epsilon);
  }
}

}  // namespace rlab::optim
