#include "rlab/agent.hpp"

#include <algorithm>
#include <cmath>

namespace rlab::agent {

bool uses_replay(System s) {
  return s == System::kSgdReplay || s == System::kAdamReplay ||
         s == System::kAdamReplayTarget;
}

bool uses_adam(System s) {
  return s == System::kAdam || s == System::kAdamReplay ||
         s == System::kAdamReplayTarget;
}

bool uses_target_network(System s) { return s == System::kAdamReplayTarget; }

std::string system_name(System s) {
  switch (s) {
    case System::kSgd: return "sgd";
    case System::kSgdReplay: return "sgd_er";
    case System::kAdam: return "adam";
    case System::kAdamReplay: return "adam_er";
    case System::kAdamReplayTarget: return "adam_er_tn";
  }
  throw std::invalid_argument("system_name: unknown system");
}

System system_from_name(const std::string& name) {
  if (name == "sgd") return System::kSgd;
  if (name == "sgd_er") return System::kSgdReplay;
  if (name == "adam") return System::kAdam;
  if (name == "adam_er") return System::kAdamReplay;
  if (name == "adam_er_tn") return System::kAdamReplayTarget;
  throw std::invalid_argument("unknown system: " + name);
}

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
  if (capacity_ < 1) {
    throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  }
  items_.reserve(static_cast<std::size_t>(capacity_));
}

void ReplayBuffer::push(Transition tr) {
  if (size() < capacity_) {
    items_.push_back(std::move(tr));
  } else {
    items_[head_] = std::move(tr);
    head_ = (head_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(int i) const {
  if (i < 0 || i >= size()) {
    throw std::out_of_range("ReplayBuffer::at");
  }
  // Before wrap-around, slot order is age order; afterwards the oldest item
  // sits at head_.
  const int slot = size() < capacity_ ? i : (head_ + i) % capacity_;
  return items_[slot];
}

std::vector<int> ReplayBuffer::sample_indices(int k, Rng& rng) const {
  if (k < 0 || k > size()) {
    throw std::invalid_argument("sample_indices: k out of range");
  }
  // Floyd's algorithm: k distinct draws with exactly k rng calls.
  std::vector<int> picks;
  picks.reserve(static_cast<std::size_t>(k));
  for (int j = size() - k; j < size(); ++j) {
    const int t = rng.uniform_int(j + 1);
    if (std::find(picks.begin(), picks.end(), t) == picks.end()) {
      picks.push_back(t);
    } else {
      picks.push_back(j);
    }
  }
  return picks;
}

void LearnerConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw std::invalid_argument("LearnerConfig: step_size must be positive");
  }
  if (exploration < 0.0 || exploration > 1.0) {
    throw std::invalid_argument("LearnerConfig: exploration must lie in [0, 1]");
  }
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("LearnerConfig: gamma must lie in [0, 1]");
  }
  if (uses_replay(system)) {
    if (batch_size < 1 || replay_capacity < batch_size) {
      throw std::invalid_argument(
          "LearnerConfig: need 1 <= batch_size <= replay_capacity");
    }
  }
  if (uses_target_network(system) && target_sync_period < 1) {
    throw std::invalid_argument("LearnerConfig: target_sync_period must be >= 1");
  }
}

int epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng) {
  if (q.empty()) {
    throw std::invalid_argument("epsilon_greedy: empty value vector");
  }
  const int n = static_cast<int>(q.size());
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return rng.uniform_int(n);
  }
  // Single pass; ties resolved by reservoir sampling so each maximizing index
  // is equally likely.
  int pick = -1;
  double best = 0.0;
  int tie_count = 0;
  for (int i = 0; i < n; ++i) {
    if (pick < 0 || q[i] > best) {
      pick = i;
      best = q[i];
      tie_count = 1;
    } else if (q[i] == best) {
      ++tie_count;
      if (rng.uniform_int(tie_count) == 0) pick = i;
    }
  }
  return pick < 0 ? 0 : pick;  // all-NaN values; divergence is handled upstream
}

Learner::Learner(const LearnerConfig& config, const nets::NetworkSpec& spec,
                 std::uint64_t net_seed, std::uint64_t agent_seed)
    : config_(config),
      control_(spec.outputs > 1),
      net_([&] {
        Rng net_rng(net_seed);
        return nets::Network(spec, net_rng);
      }()),
      agent_rng_(agent_seed) {
  config_.validate();
  if (uses_target_network(config_.system)) {
    target_ = net_;  // starts as an exact copy
  }
  if (uses_replay(config_.system)) {
    buffer_.emplace(config_.replay_capacity);
  }
  if (uses_adam(config_.system)) {
    adam_ = optim::make_adam_state(config_.step_size, config_.beta1,
                                   config_.beta2, net_.param_count(),
                                   config_.adam_epsilon);
  }
}

int Learner::select_action(const feat::FeatureVector& x) {
  const std::vector<double>& q = net_.forward(x);
  return epsilon_greedy(q, config_.exploration, agent_rng_);
}

double Learner::td_error(const Transition& tr) {
  double bootstrap = 0.0;
  if (!tr.terminal) {
    nets::Network& source = target_ ? *target_ : net_;
    bootstrap = source.forward(tr.s_next)[tr.next_action];
  }
  const double estimate = net_.forward(tr.s)[tr.action];
  return tr.reward + config_.gamma * bootstrap - estimate;
}

void Learner::note_delta(double delta) {
  if (!std::isfinite(delta)) diverged_ = true;
}

void Learner::apply(std::span<const double> grad) {
  if (adam_) {
    optim::adam_step(net_.params(), grad, *adam_);
  } else {
    optim::sgd_step(net_.params(), grad, config_.step_size);
  }
}

void Learner::online_update(const Transition& tr) {
  const double delta = td_error(tr);
  note_delta(delta);
  if (diverged_) return;
  net_.backward(tr.action, grad_);
  for (double& g : grad_) g *= -delta;  // descend on -delta * dV/dw
  apply(grad_);
}

void Learner::replay_update() {
  const std::vector<int> picks =
      buffer_->sample_indices(config_.batch_size, agent_rng_);
  batch_grad_.assign(static_cast<std::size_t>(net_.param_count()), 0.0);
  const double scale = 1.0 / static_cast<double>(config_.batch_size);
  for (int pick : picks) {
    const Transition& tr = buffer_->at(pick);
    const double delta = td_error(tr);
    note_delta(delta);
    if (diverged_) return;
    net_.backward(tr.action, grad_);
    const double coeff = -delta * scale;
    for (std::size_t i = 0; i < grad_.size(); ++i) {
      batch_grad_[i] += coeff * grad_[i];
    }
  }
  apply(batch_grad_);
}

void Learner::learn(const Transition& tr) {
  if (!diverged_) {
    if (buffer_) {
      buffer_->push(tr);
      if (buffer_->size() >= config_.batch_size) {
        replay_update();
      }
    } else {
      online_update(tr);
    }
  }
  ++env_steps_;
  if (target_ && env_steps_ % config_.target_sync_period == 0) {
    std::copy(net_.params().begin(), net_.params().end(),
              target_->params().begin());
  }
}

int Learner::start_episode(const feat::FeatureVector& x) {
  pending_x_ = x;
  pending_ = true;
  if (control_) {
    pending_action_ = select_action(pending_x_);
    return pending_action_;
  }
  pending_action_ = 0;
  return -1;
}

}  // namespace rlab::agent
