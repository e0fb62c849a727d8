#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "rlab/rng.hpp"

namespace rlab::env {

// Both tasks use three throttle actions.
inline constexpr int kNumActions = 3;
inline constexpr int kReverse = 0;
inline constexpr int kCoast = 1;
inline constexpr int kForward = 2;

struct StepResult {
  double reward = -1.0;
  bool terminal = false;
};

// Classic under-powered car on a valley floor. State is (position, velocity);
// reward is -1 per step and 0 on the transition that reaches the goal.
class MountainCar {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMinVelocity = -0.07;
  static constexpr double kMaxVelocity = 0.07;
  static constexpr double kGoalPosition = 0.5;
  static constexpr int kDims = 2;

  template <class R>
  void reset(R& rng) {
    position_ = rng.uniform(-0.6, -0.4);
    velocity_ = 0.0;
  }

  void set_state(double position, double velocity);

  StepResult step(int action);

  double position() const { return position_; }
  double velocity() const { return velocity_; }
  std::array<double, 2> state() const { return {position_, velocity_}; }

 private:
  double position_ = -0.5;
  double velocity_ = 0.0;
};

// Two-link pendulum swinging up against gravity. State is
// (theta1, theta2, omega1, omega2); the tip must rise one link length above
// the pivot. Dynamics advance by one RK4 step of 0.2s per action.
class Acrobot {
 public:
  static constexpr int kDims = 4;
  static constexpr double kMaxAngularVel1 = 4.0 * 3.14159265358979323846;
  static constexpr double kMaxAngularVel2 = 9.0 * 3.14159265358979323846;

  template <class R>
  void reset(R& rng) {
    for (double& v : s_) v = rng.uniform(-0.1, 0.1);
  }

  void set_state(const std::array<double, 4>& state);

  StepResult step(int action);

  const std::array<double, 4>& state() const { return s_; }

  // Tip height above the pivot exceeds one link length. Uses cosines only,
  // so it is invariant to shifting either angle by a full turn.
  static bool goal_reached(double theta1, double theta2);

  // Time derivative of (theta1, theta2, omega1, omega2) under a torque;
  // exposed so tests can integrate the same vector field independently.
  static std::array<double, 4> derivatives(const std::array<double, 4>& s,
                                           double torque);

 private:
  std::array<double, 4> s_{};
};

// Fixed behaviour policy for the car: push against the current direction of
// travel to pump energy into the oscillation.
template <class Car>
int energy_pumping_action(const Car& car) {
  return car.velocity() < 0.0 ? kReverse : kForward;
}

struct RawTransition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

struct EpisodeTrace {
  std::vector<RawTransition> transitions;
  int steps = 0;
  bool terminated = false;  // false when the step cutoff truncated the episode
};

// Runs one episode under a fixed policy(env) -> action. Truncation at
// `cutoff` steps does not mark the final transition terminal.
template <class Env, class Policy>
EpisodeTrace run_episode(Env& env, Policy&& policy, int cutoff, Rng& rng) {
  if (cutoff < 1) {
    throw std::invalid_argument("run_episode: cutoff must be >= 1");
  }
  env.reset(rng);
  EpisodeTrace trace;
  while (trace.steps < cutoff) {
    RawTransition tr;
    {
      const auto s = env.state();
      tr.state.assign(s.begin(), s.end());
    }
    tr.action = policy(env);
    const StepResult sr = env.step(tr.action);
    tr.reward = sr.reward;
    tr.terminal = sr.terminal;
    {
      const auto s = env.state();
      tr.next_state.assign(s.begin(), s.end());
    }
    trace.transitions.push_back(std::move(tr));
    ++trace.steps;
    if (sr.terminal) {
      trace.terminated = true;
      break;
    }
  }
  return trace;
}

}  // namespace rlab::env
