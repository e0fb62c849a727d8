#include "rlab/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab::eval {

double rve(nets::Network& net, feat::Featurizer& featurizer,
           const EvalDataset& dataset) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("rve: empty dataset");
  }
  if (dataset.states.size() != dataset.true_values.size()) {
    throw std::invalid_argument("rve: states/values size mismatch");
  }
  double sum_sq = 0.0;
  for (int i = 0; i < dataset.size(); ++i) {
    const feat::FeatureVector x = featurizer.encode(dataset.states[i]);
    const double v = net.forward(x)[0];
    const double err = v - dataset.true_values[i];
    sum_sq += err * err;
  }
  return std::sqrt(sum_sq / dataset.size());
}

namespace {

// Accumulates normalized gradients one at a time. For unit vectors u_i,
// ||sum u_i||^2 = m + 2 * sum_{i<j} u_i . u_j, so the mean pairwise cosine
// falls out of a single pass in O(count * dim).
class CosineAccumulator {
 public:
  explicit CosineAccumulator(std::size_t dim) : sum_(dim, 0.0) {}

  void add(std::span<const double> g) {
    if (g.size() != sum_.size()) {
      throw std::invalid_argument("pairwise cosine: dimension mismatch");
    }
    ++total_;
    double norm_sq = 0.0;
    for (double v : g) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (norm < kGradientNormFloor) return;
    for (std::size_t i = 0; i < sum_.size(); ++i) sum_[i] += g[i] / norm;
    ++used_;
  }

  InterferenceResult finish() const {
    InterferenceResult result;
    result.pairs_used = used_ * (used_ - 1) / 2;
    result.pairs_skipped = total_ * (total_ - 1) / 2 - result.pairs_used;
    if (used_ < 2) {
      throw std::runtime_error(
          "pairwise cosine: fewer than two usable gradients");
    }
    double sum_norm_sq = 0.0;
    for (double v : sum_) sum_norm_sq += v * v;
    result.mean = (sum_norm_sq - static_cast<double>(used_)) /
                  (static_cast<double>(used_) * static_cast<double>(used_ - 1));
    return result;
  }

 private:
  std::vector<double> sum_;
  long long total_ = 0;
  long long used_ = 0;
};

}  // namespace

InterferenceResult mean_pairwise_cosine(
    const std::vector<std::vector<double>>& gradients) {
  if (gradients.size() < 2) {
    throw std::invalid_argument("mean_pairwise_cosine: need at least two gradients");
  }
  CosineAccumulator acc(gradients[0].size());
  for (const auto& g : gradients) acc.add(g);
  return acc.finish();
}

InterferenceResult pairwise_interference(nets::Network& net,
                                         feat::Featurizer& featurizer,
                                         const EvalDataset& dataset) {
  if (dataset.size() < 2) {
    throw std::invalid_argument("pairwise_interference: need at least two states");
  }
  CosineAccumulator acc(static_cast<std::size_t>(net.param_count()));
  std::vector<double> grad;
  for (const auto& state : dataset.states) {
    net.forward(featurizer.encode(state));
    net.backward(0, grad);
    acc.add(grad);
  }
  return acc.finish();
}

std::vector<int> interference_episodes(int max_episodes) {
  if (max_episodes < 0) {
    throw std::invalid_argument("interference_episodes: negative max");
  }
  std::vector<int> points;
  for (int p : {0, 1, 5, 10, 25}) {
    if (p <= max_episodes) points.push_back(p);
  }
  for (int p = 50; p <= max_episodes; p += 25) {
    points.push_back(p);
  }
  return points;
}

}  // namespace rlab::eval
