#pragma once

#include <span>
#include <vector>

namespace rlab::optim {

// params[i] -= alpha * grad[i]. Callers minimizing a TD pseudo-objective pass
// -delta * dV/dw as the gradient, which makes this the usual semi-gradient
// ascent on delta.
void sgd_step(std::span<double> params, std::span<const double> grad, double alpha);

struct AdamState {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long long t = 0;
  std::vector<double> m;
  std::vector<double> v;
};

AdamState make_adam_state(double alpha, double beta1, double beta2,
                          int param_count, double epsilon = 1e-8);

// One Adam update with bias correction:
//   t += 1
//   m = beta1 m + (1 - beta1) g        mhat = m / (1 - beta1^t)
//   v = beta2 v + (1 - beta2) g^2      vhat = v / (1 - beta2^t)
//   w -= alpha * mhat / (sqrt(vhat) + epsilon)
void adam_step(std::span<double> params, std::span<const double> grad,
               AdamState& state);

}  // namespace rlab::optim
