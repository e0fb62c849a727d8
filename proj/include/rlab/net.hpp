#pragma once

#include <span>
#include <vector>

#include "rlab/featurize.hpp"
#include "rlab/rng.hpp"

namespace rlab::nets {

struct NetworkSpec {
  int input_length = 0;
  std::vector<int> hidden_layers;  // may be empty: a purely linear map
  int outputs = 1;

  int layer_count() const { return static_cast<int>(hidden_layers.size()) + 1; }
  void validate() const;
};

// Fully connected network: ReLU hidden layers, linear output layer, biases
// everywhere. All parameters live in one flat vector so optimizers and
// gradient consumers share a single layout:
//   for each layer l = 0..L-1, in order:
//     weights W_l, row-major, shape (out_l x in_l): W_l[r, c] at
//       weight_offset(l) + r * in_l + c
//     biases b_l (out_l entries) at bias_offset(l)
// Gradients returned by backward() use the same layout.
class Network {
 public:
  // Weights are Xavier-uniform in +-sqrt(6 / (fan_in + fan_out)), biases 0.
  // Draw order: layer by layer, weights row-major, one uniform per weight.
  Network(NetworkSpec spec, Rng& rng);

  const NetworkSpec& spec() const { return spec_; }
  int param_count() const { return static_cast<int>(params_.size()); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  int weight_offset(int layer) const { return w_off_[layer]; }
  int bias_offset(int layer) const { return b_off_[layer]; }
  int layer_inputs(int layer) const { return in_[layer]; }
  int layer_outputs(int layer) const { return out_[layer]; }

  // Computes all outputs and caches activations for backward(). The FeatureVector
  // length must equal the spec input length. Returns the output vector.
  const std::vector<double>& forward(const feat::FeatureVector& x);

  // Gradient of output `output_index` with respect to every parameter, using
  // the activations cached by the most recent forward(). `grad` is resized to
  // param_count() and overwritten.
  void backward(int output_index, std::vector<double>& grad) const;
  std::vector<double> backward(int output_index) const;

  bool params_finite() const;

 private:
  NetworkSpec spec_;
  std::vector<int> in_, out_;
  std::vector<int> w_off_, b_off_;
  std::vector<double> params_;

  // Forward cache.
  feat::FeatureVector input_;
  std::vector<std::vector<double>> pre_;   // pre-activations per layer
  std::vector<std::vector<double>> act_;   // post-activations per layer
  bool has_forward_ = false;
};

struct ResponseEntry {
  int unit = 0;
  double x0 = 0.0;
  double x1 = 0.0;
  double activation = 0.0;
};

// Activation of each first-hidden-layer unit over an inclusive grid_points x
// grid_points lattice spanning 2-D state bounds, encoded through `featurizer`.
// Requires a network with at least one hidden layer.
std::vector<ResponseEntry> response_map(Network& net, feat::Featurizer& featurizer,
                                        const feat::BoundsSpec& bounds,
                                        int grid_points);

}  // namespace rlab::nets
