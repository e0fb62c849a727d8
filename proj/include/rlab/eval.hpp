#pragma once

#include <array>
#include <span>
#include <vector>

#include "rlab/env.hpp"
#include "rlab/featurize.hpp"
#include "rlab/net.hpp"
#include "rlab/rng.hpp"

namespace rlab::eval {

// Rollouts and the on-policy walk refuse to run past this many steps; the
// behaviour policy reaches the goal orders of magnitude sooner.
inline constexpr long long kRolloutCap = 100000;

struct EvalDataset {
  std::vector<std::array<double, 2>> states;
  std::vector<double> true_values;

  int size() const { return static_cast<int>(states.size()); }
};

// Undiscounted return of one deterministic rollout from `state` under
// policy(env) -> action. Throws if the rollout exceeds kRolloutCap steps.
template <class Policy>
double true_value(const std::array<double, 2>& state, Policy&& policy) {
  env::MountainCar car;
  car.set_state(state[0], state[1]);
  double ret = 0.0;
  for (long long step = 0; step < kRolloutCap; ++step) {
    const env::StepResult sr = car.step(policy(car));
    ret += sr.reward;
    if (sr.terminal) return ret;
  }
  throw std::runtime_error("true_value: rollout exceeded step cap");
}

// Walks the car under `policy` for walk_steps decision points (resetting after
// goals), draws sample_size of the visited states uniformly without
// replacement, and attaches each state's rollout return. The walk and the
// sampling decisions use separate substreams of `seed`, so the visited-state
// sequence depends only on the walk substream.
template <class Policy>
EvalDataset build_eval_dataset(Policy&& policy, long long walk_steps,
                               int sample_size, std::uint64_t seed) {
  if (walk_steps < 1 || sample_size < 1 || sample_size > walk_steps) {
    throw std::invalid_argument(
        "build_eval_dataset: need 1 <= sample_size <= walk_steps");
  }
  EvalDataset dataset;
  dataset.states.reserve(static_cast<std::size_t>(sample_size));

  Rng walk_rng(derive_seed(seed, 0));
  Rng sample_rng(derive_seed(seed, 1));
  env::MountainCar car;
  car.reset(walk_rng);
  long long remaining = walk_steps;
  long long needed = sample_size;
  for (long long step = 0; step < walk_steps; ++step) {
    // Selection sampling: keep each state with probability needed/remaining,
    // which draws uniformly without replacement from the whole walk.
    if (sample_rng.uniform() * static_cast<double>(remaining) <
        static_cast<double>(needed)) {
      dataset.states.push_back(car.state());
      --needed;
    }
    --remaining;
    const env::StepResult sr = car.step(policy(car));
    if (sr.terminal) car.reset(walk_rng);
  }

  dataset.true_values.reserve(dataset.states.size());
  for (const auto& s : dataset.states) {
    dataset.true_values.push_back(true_value(s, policy));
  }
  return dataset;
}

// Root-mean-squared value error of the network over the dataset.
double rve(nets::Network& net, feat::Featurizer& featurizer,
           const EvalDataset& dataset);

struct InterferenceResult {
  double mean = 0.0;          // average pairwise cosine similarity
  long long pairs_used = 0;
  long long pairs_skipped = 0;  // pairs involving a near-zero gradient
};

inline constexpr double kGradientNormFloor = 1e-12;

// Mean cosine similarity over all unordered distinct pairs of gradients.
// Gradients with norm below kGradientNormFloor are excluded (their pairs are
// counted as skipped). Throws when fewer than two usable gradients remain.
// Computed in O(n * d) from the normalized-gradient sum.
InterferenceResult mean_pairwise_cosine(
    const std::vector<std::vector<double>>& gradients);

// Pairwise interference of the network's value gradients at the dataset
// states (output 0 of the network).
InterferenceResult pairwise_interference(nets::Network& net,
                                         feat::Featurizer& featurizer,
                                         const EvalDataset& dataset);

// Measurement points in completed episodes: 0 (after initialization), 1, 5,
// 10, 25, then every 25 up to and including max_episodes.
std::vector<int> interference_episodes(int max_episodes);

struct InterferenceSnapshot {
  int episode = 0;
  double mean = 0.0;
};

}  // namespace rlab::eval
