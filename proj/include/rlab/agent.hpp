#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/env.hpp"
#include "rlab/featurize.hpp"
#include "rlab/net.hpp"
#include "rlab/optim.hpp"
#include "rlab/rng.hpp"

namespace rlab::agent {

enum class System {
  kSgd,
  kSgdReplay,
  kAdam,
  kAdamReplay,
  kAdamReplayTarget,
};

bool uses_replay(System s);
bool uses_adam(System s);
bool uses_target_network(System s);
std::string system_name(System s);
System system_from_name(const std::string& name);

struct Transition {
  feat::FeatureVector s;
  int action = 0;       // output index the update applies to (0 for prediction)
  double reward = 0.0;
  feat::FeatureVector s_next;
  int next_action = 0;  // action committed at s_next; ignored when terminal
  bool terminal = false;
};

// FIFO ring of recent transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity);

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(items_.size()); }
  void push(Transition tr);

  // i-th oldest stored transition, i in [0, size).
  const Transition& at(int i) const;

  // k distinct uniform positions in [0, size), in draw order.
  std::vector<int> sample_indices(int k, Rng& rng) const;

 private:
  int capacity_;
  int head_ = 0;  // slot that the next push overwrites once full
  std::vector<Transition> items_;
};

struct LearnerConfig {
  System system = System::kSgd;
  double step_size = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double gamma = 1.0;
  double exploration = 0.1;  // epsilon-greedy rate, control only
  int batch_size = 32;
  int replay_capacity = 2000;
  int target_sync_period = 100;

  void validate() const;
};

// Uniformly random action with probability epsilon, otherwise a greedy pick
// with ties broken uniformly among the maximizing indices.
int epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng);

// One TD(0) learner: network, optimizer, optional replay buffer and target
// network, wired per `config.system`. Control mode (Sarsa(0)) is used when the
// network has more than one output; a single output means prediction mode.
class Learner {
 public:
  Learner(const LearnerConfig& config, const nets::NetworkSpec& spec,
          std::uint64_t net_seed, std::uint64_t agent_seed);

  nets::Network& network() { return net_; }
  const nets::Network& network() const { return net_; }
  const nets::Network* target_network() const {
    return target_ ? &*target_ : nullptr;
  }
  const ReplayBuffer* replay_buffer() const {
    return buffer_ ? &*buffer_ : nullptr;
  }
  const LearnerConfig& config() const { return config_; }
  long long env_steps() const { return env_steps_; }
  bool diverged() const { return diverged_; }

  int select_action(const feat::FeatureVector& x);

  // TD error R + gamma * bootstrap(s', a') - estimate(s, a); the bootstrap is
  // 0 on terminal transitions and comes from the target network when one is
  // configured. Leaves the live network's forward cache at `tr.s`.
  double td_error(const Transition& tr);

  // Feeds one environment transition to the configured variant: a direct
  // update for online systems, or buffer-then-replay-batch for ER systems
  // (the fresh transition is only learned from via sampling). Advances the
  // step counter and performs any due target-network sync.
  void learn(const Transition& tr);

  // Begins an episode at encoded state `x`; in control mode commits the first
  // action (returned; prediction mode returns -1).
  int start_episode(const feat::FeatureVector& x);

  // Advances one committed Sarsa(0) step: act, encode successor, pick the
  // successor action, learn. Requires start_episode first.
  template <class Env>
  env::StepResult step_control(Env& env, feat::Featurizer& featurizer) {
    require_pending();
    const env::StepResult sr = env.step(pending_action_);
    Transition tr;
    tr.s = std::move(pending_x_);
    tr.action = pending_action_;
    tr.reward = sr.reward;
    tr.terminal = sr.terminal;
    {
      const auto s = env.state();
      tr.s_next = featurizer.encode(std::span<const double>(s.begin(), s.end()));
    }
    tr.next_action = sr.terminal ? 0 : select_action(tr.s_next);
    learn(tr);
    if (!sr.terminal) {
      pending_x_ = std::move(tr.s_next);
      pending_action_ = tr.next_action;
    } else {
      pending_ = false;
    }
    return sr;
  }

  // Advances one on-policy evaluation step under a fixed policy(env) -> action.
  template <class Env, class Policy>
  env::StepResult step_prediction(Env& env, Policy&& policy,
                                  feat::Featurizer& featurizer) {
    require_pending();
    const env::StepResult sr = env.step(policy(env));
    Transition tr;
    tr.s = std::move(pending_x_);
    tr.action = 0;
    tr.reward = sr.reward;
    tr.terminal = sr.terminal;
    {
      const auto s = env.state();
      tr.s_next = featurizer.encode(std::span<const double>(s.begin(), s.end()));
    }
    tr.next_action = 0;
    learn(tr);
    if (!sr.terminal) {
      pending_x_ = std::move(tr.s_next);
    } else {
      pending_ = false;
    }
    return sr;
  }

 private:
  void require_pending() const {
    if (!pending_) {
      throw std::logic_error("Learner: no episode in progress");
    }
  }
  void online_update(const Transition& tr);
  void replay_update();
  void apply(std::span<const double> grad);
  void note_delta(double delta);

  LearnerConfig config_;
  bool control_;
  nets::Network net_;
  std::optional<nets::Network> target_;
  std::optional<ReplayBuffer> buffer_;
  std::optional<optim::AdamState> adam_;
  Rng agent_rng_;

  std::vector<double> grad_;
  std::vector<double> batch_grad_;

  feat::FeatureVector pending_x_;
  int pending_action_ = 0;
  bool pending_ = false;

  long long env_steps_ = 0;
  bool diverged_ = false;
};

}  // namespace rlab::agent
