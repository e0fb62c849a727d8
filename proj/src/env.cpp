#include "rlab/env.hpp"

#include <cmath>

namespace rlab::env {

namespace {

double clamp(double x, double lo, double hi) {
  if (x < lo) return lo;
  if (x > hi) return hi;
  return x;
}

int validate_action(int action) {
  if (action < 0 || action >= kNumActions) {
    throw std::invalid_argument("step: action out of range");
  }
  return action;
}

}  // namespace

void MountainCar::set_state(double position, double velocity) {
  if (position < kMinPosition || position > kMaxPosition ||
      velocity < kMinVelocity || velocity > kMaxVelocity) {
    throw std::invalid_argument("MountainCar::set_state: out of bounds");
  }
  position_ = position;
  velocity_ = velocity;
}

StepResult MountainCar::step(int action) {
  const double throttle = static_cast<double>(validate_action(action) - 1);
  velocity_ = clamp(velocity_ + 0.001 * throttle - 0.0025 * std::cos(3.0 * position_),
                    kMinVelocity, kMaxVelocity);
  position_ = clamp(position_ + velocity_, kMinPosition, kMaxPosition);
  if (position_ <= kMinPosition && velocity_ < 0.0) {
    velocity_ = 0.0;  // inelastic wall at the left edge
  }
  StepResult result;
  result.terminal = position_ >= kGoalPosition;
  result.reward = result.terminal ? 0.0 : -1.0;
  return result;
}

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGravity = 9.8;
constexpr double kMass1 = 1.0;
constexpr double kMass2 = 1.0;
constexpr double kLength1 = 1.0;
constexpr double kCom1 = 0.5;
constexpr double kCom2 = 0.5;
constexpr double kInertia1 = 1.0;
constexpr double kInertia2 = 1.0;
constexpr double kTimeStep = 0.2;

double wrap_angle(double x) {
  const double two_pi = 2.0 * kPi;
  x = std::fmod(x + kPi, two_pi);
  if (x < 0.0) x += two_pi;
  return x - kPi;
}

}  // namespace

std::array<double, 4> Acrobot::derivatives(const std::array<double, 4>& s,
                                           double torque) {
  const double theta1 = s[0];
  const double theta2 = s[1];
  const double dtheta1 = s[2];
  const double dtheta2 = s[3];

  const double d1 = kMass1 * kCom1 * kCom1 +
                    kMass2 * (kLength1 * kLength1 + kCom2 * kCom2 +
                              2.0 * kLength1 * kCom2 * std::cos(theta2)) +
                    kInertia1 + kInertia2;
  const double d2 = kMass2 * (kCom2 * kCom2 + kLength1 * kCom2 * std::cos(theta2)) +
                    kInertia2;
  const double phi2 =
      kMass2 * kCom2 * kGravity * std::cos(theta1 + theta2 - kPi / 2.0);
  const double phi1 =
      -kMass2 * kLength1 * kCom2 * dtheta2 * dtheta2 * std::sin(theta2) -
      2.0 * kMass2 * kLength1 * kCom2 * dtheta2 * dtheta1 * std::sin(theta2) +
      (kMass1 * kCom1 + kMass2 * kLength1) * kGravity *
          std::cos(theta1 - kPi / 2.0) +
      phi2;
  const double ddtheta2 =
      (torque + d2 / d1 * phi1 -
       kMass2 * kLength1 * kCom2 * dtheta1 * dtheta1 * std::sin(theta2) - phi2) /
      (kMass2 * kCom2 * kCom2 + kInertia2 - d2 * d2 / d1);
  const double ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;

  return {dtheta1, dtheta2, ddtheta1, ddtheta2};
}

void Acrobot::set_state(const std::array<double, 4>& state) {
  s_ = state;
  s_[0] = wrap_angle(s_[0]);
  s_[1] = wrap_angle(s_[1]);
  s_[2] = clamp(s_[2], -kMaxAngularVel1, kMaxAngularVel1);
  s_[3] = clamp(s_[3], -kMaxAngularVel2, kMaxAngularVel2);
}

bool Acrobot::goal_reached(double theta1, double theta2) {
  return -std::cos(theta1) - std::cos(theta1 + theta2) > 1.0;
}

StepResult Acrobot::step(int action) {
  const double torque = static_cast<double>(validate_action(action) - 1);

  const auto f = [torque](const std::array<double, 4>& y) {
    return derivatives(y, torque);
  };
  const auto axpy = [](const std::array<double, 4>& y, double h,
                       const std::array<double, 4>& k) {
    std::array<double, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = y[i] + h * k[i];
    return out;
  };

  const std::array<double, 4> k1 = f(s_);
  const std::array<double, 4> k2 = f(axpy(s_, kTimeStep / 2.0, k1));
  const std::array<double, 4> k3 = f(axpy(s_, kTimeStep / 2.0, k2));
  const std::array<double, 4> k4 = f(axpy(s_, kTimeStep, k3));
  for (int i = 0; i < 4; ++i) {
    s_[i] += kTimeStep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  s_[0] = wrap_angle(s_[0]);
  s_[1] = wrap_angle(s_[1]);
  s_[2] = clamp(s_[2], -kMaxAngularVel1, kMaxAngularVel1);
  s_[3] = clamp(s_[3], -kMaxAngularVel2, kMaxAngularVel2);

  StepResult result;
  result.terminal = goal_reached(s_[0], s_[1]);
  result.reward = result.terminal ? 0.0 : -1.0;
  return result;
}

}  // namespace rlab::env
