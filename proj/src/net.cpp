#include "rlab/net.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace rlab::nets {

void NetworkSpec::validate() const {
  if (input_length < 1) {
    throw std::invalid_argument("NetworkSpec: input_length must be >= 1");
  }
  if (outputs < 1) {
    throw std::invalid_argument("NetworkSpec: outputs must be >= 1");
  }
  for (int h : hidden_layers) {
    if (h < 1) {
      throw std::invalid_argument("NetworkSpec: hidden widths must be >= 1");
    }
  }
}

Network::Network(NetworkSpec spec, Rng& rng) : spec_(std::move(spec)) {
  spec_.validate();
  const int layers = spec_.layer_count();
  in_.resize(layers);
  out_.resize(layers);
  w_off_.resize(layers);
  b_off_.resize(layers);

  int offset = 0;
  for (int l = 0; l < layers; ++l) {
    in_[l] = (l == 0) ? spec_.input_length : spec_.hidden_layers[l - 1];
    out_[l] = (l == layers - 1) ? spec_.outputs : spec_.hidden_layers[l];
    w_off_[l] = offset;
    offset += out_[l] * in_[l];
    b_off_[l] = offset;
    offset += out_[l];
  }
  params_.assign(offset, 0.0);

  for (int l = 0; l < layers; ++l) {
    const double bound = std::sqrt(6.0 / (in_[l] + out_[l]));
    double* w = params_.data() + w_off_[l];
    const int count = out_[l] * in_[l];
    for (int i = 0; i < count; ++i) {
      w[i] = rng.uniform(-bound, bound);
    }
  }

  pre_.resize(layers);
  act_.resize(layers);
  for (int l = 0; l < layers; ++l) {
    pre_[l].resize(out_[l]);
    act_[l].resize(out_[l]);
  }
}

const std::vector<double>& Network::forward(const feat::FeatureVector& x) {
  if (x.length != spec_.input_length) {
    throw std::invalid_argument("forward: input length mismatch");
  }
  if (!x.sparse && static_cast<int>(x.values.size()) != x.length) {
    throw std::invalid_argument("forward: dense input size mismatch");
  }
  input_ = x;
  const int layers = spec_.layer_count();

  for (int l = 0; l < layers; ++l) {
    const double* w = params_.data() + w_off_[l];
    const double* b = params_.data() + b_off_[l];
    const int n_in = in_[l];
    const int n_out = out_[l];
    std::vector<double>& pre = pre_[l];

    if (l == 0 && x.sparse) {
      for (int r = 0; r < n_out; ++r) {
        double sum = b[r];
        const double* row = w + r * n_in;
        for (int idx : x.active) {
          if (idx < 0 || idx >= n_in) {
            throw std::invalid_argument("forward: active index out of range");
          }
          sum += row[idx];
        }
        pre[r] = sum;
      }
    } else {
      const std::vector<double>& src = (l == 0) ? x.values : act_[l - 1];
      for (int r = 0; r < n_out; ++r) {
        double sum = b[r];
        const double* row = w + r * n_in;
        for (int c = 0; c < n_in; ++c) {
          sum += row[c] * src[c];
        }
        pre[r] = sum;
      }
    }

    if (l == layers - 1) {
      act_[l] = pre;  // linear output
    } else {
      for (int r = 0; r < n_out; ++r) {
        act_[l][r] = pre[r] > 0.0 ? pre[r] : 0.0;
      }
    }
  }
  has_forward_ = true;
  return act_[layers - 1];
}

void Network::backward(int output_index, std::vector<double>& grad) const {
  if (!has_forward_) {
    throw std::logic_error("backward: no cached forward pass");
  }
  if (output_index < 0 || output_index >= spec_.outputs) {
    throw std::invalid_argument("backward: output index out of range");
  }
  grad.assign(params_.size(), 0.0);
  const int layers = spec_.layer_count();

  // delta = d(selected output) / d(pre-activation of current layer).
  std::vector<double> delta(1, 1.0);
  for (int l = layers - 1; l >= 0; --l) {
    const int n_in = in_[l];
    const int n_out = out_[l];
    const double* w = params_.data() + w_off_[l];
    double* gw = grad.data() + w_off_[l];
    double* gb = grad.data() + b_off_[l];

    if (l == layers - 1) {
      delta.assign(n_out, 0.0);
      delta[output_index] = 1.0;
    } else {
      // delta arriving from layer l+1 is in `next`; apply the ReLU derivative
      // of this layer's pre-activations (0 at the kink).
      for (int r = 0; r < n_out; ++r) {
        if (pre_[l][r] <= 0.0) delta[r] = 0.0;
      }
    }

    for (int r = 0; r < n_out; ++r) {
      const double d = delta[r];
      if (d == 0.0) continue;
      gb[r] = d;
      double* grow = gw + r * n_in;
      if (l == 0 && input_.sparse) {
        for (int idx : input_.active) grow[idx] = d;
      } else {
        const std::vector<double>& src = (l == 0) ? input_.values : act_[l - 1];
        for (int c = 0; c < n_in; ++c) grow[c] = d * src[c];
      }
    }

    if (l > 0) {
      std::vector<double> prev(n_in, 0.0);
      for (int r = 0; r < n_out; ++r) {
        const double d = delta[r];
        if (d == 0.0) continue;
        const double* row = w + r * n_in;
        for (int c = 0; c < n_in; ++c) prev[c] += d * row[c];
      }
      delta = std::move(prev);
    }
  }
}

std::vector<double> Network::backward(int output_index) const {
  std::vector<double> grad;
  backward(output_index, grad);
  return grad;
}

bool Network::params_finite() const {
  for (double p : params_) {
    if (!std::isfinite(p)) return false;
  }
  return true;
}

std::vector<ResponseEntry> response_map(Network& net, feat::Featurizer& featurizer,
                                        const feat::BoundsSpec& bounds,
                                        int grid_points) {
  bounds.validate();
  if (bounds.dims() != 2) {
    throw std::invalid_argument("response_map: requires 2-D bounds");
  }
  if (grid_points < 2) {
    throw std::invalid_argument("response_map: grid_points must be >= 2");
  }
  if (net.spec().hidden_layers.empty()) {
    throw std::invalid_argument("response_map: network has no hidden layer");
  }
  const int units = net.spec().hidden_layers[0];
  const double* w = net.params().data() + net.weight_offset(0);
  const double* b = net.params().data() + net.bias_offset(0);
  const int n_in = net.layer_inputs(0);

  std::vector<ResponseEntry> entries;
  entries.reserve(static_cast<std::size_t>(units) * grid_points * grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double x0 = bounds.lo[0] +
                      (bounds.hi[0] - bounds.lo[0]) * i / (grid_points - 1);
    for (int j = 0; j < grid_points; ++j) {
      const double x1 = bounds.lo[1] +
                        (bounds.hi[1] - bounds.lo[1]) * j / (grid_points - 1);
      const std::array<double, 2> obs{x0, x1};
      const feat::FeatureVector x = featurizer.encode(obs);
      for (int u = 0; u < units; ++u) {
        double sum = b[u];
        const double* row = w + u * n_in;
        if (x.sparse) {
          for (int idx : x.active) sum += row[idx];
        } else {
          for (int c = 0; c < n_in; ++c) sum += row[c] * x.values[c];
        }
        entries.push_back({u, x0, x1, sum > 0.0 ? sum : 0.0});
      }
    }
  }
  return entries;
}

}  // namespace rlab::nets
