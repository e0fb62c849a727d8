#pragma once

// Independent re-derivation of the two-link swing-up dynamics used by the
// tests as an oracle. Instead of the production code's elimination form
// (solve for the second acceleration, back-substitute the first), this
// assembles the mass matrix and solves with Cramer's rule, and the RK4 stages
// are written out long-hand. Agreement to 1e-10 is therefore evidence the
// production step integrates the intended vector field, not a tautology.

#include <algorithm>
#include <array>
#include <cmath>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

inline std::array<double, 4> acrobot_derivatives(const std::array<double, 4>& s,
                                                 double torque) {
  const double m1 = 1.0, m2 = 1.0;
  const double l1 = 1.0;
  const double lc1 = 0.5, lc2 = 0.5;
  const double i1 = 1.0, i2 = 1.0;
  const double g = 9.8;

  const double t1 = s[0], t2 = s[1], w1 = s[2], w2 = s[3];
  const double c2 = std::cos(t2);
  const double s2 = std::sin(t2);

  // Mass matrix of the two-link arm.
  const double m11 = m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2) + i1 + i2;
  const double m12 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + i2;
  const double m22 = m2 * lc2 * lc2 + i2;

  // Coriolis/centrifugal and gravity torques. Angles measure from the
  // downward vertical, so the gravity lever arm is sin(angle).
  const double grav2 = m2 * lc2 * g * std::sin(t1 + t2);
  const double grav1 = (m1 * lc1 + m2 * l1) * g * std::sin(t1) + grav2;
  const double cor1 = -m2 * l1 * lc2 * s2 * (w2 * w2 + 2.0 * w1 * w2);

  // M [a1 a2]^T = [b1 b2]^T, solved by Cramer's rule.
  const double b1 = -(cor1 + grav1);
  const double b2 = torque - (m2 * l1 * lc2 * s2 * w1 * w1 + grav2);
  const double det = m11 * m22 - m12 * m12;
  const double a1 = (b1 * m22 - m12 * b2) / det;
  const double a2 = (m11 * b2 - m12 * b1) / det;

  return {w1, w2, a1, a2};
}

inline double wrap_angle(double x) {
  const double two_pi = 2.0 * kPi;
  x = std::fmod(x + kPi, two_pi);
  if (x < 0.0) x += two_pi;
  return x - kPi;
}

inline std::array<double, 4> acrobot_rk4_step(const std::array<double, 4>& s,
                                              double torque) {
  const double dt = 0.2;
  const std::array<double, 4> k1 = acrobot_derivatives(s, torque);

  std::array<double, 4> mid1;
  for (int i = 0; i < 4; ++i) mid1[i] = s[i] + 0.5 * dt * k1[i];
  const std::array<double, 4> k2 = acrobot_derivatives(mid1, torque);

  std::array<double, 4> mid2;
  for (int i = 0; i < 4; ++i) mid2[i] = s[i] + 0.5 * dt * k2[i];
  const std::array<double, 4> k3 = acrobot_derivatives(mid2, torque);

  std::array<double, 4> end;
  for (int i = 0; i < 4; ++i) end[i] = s[i] + dt * k3[i];
  const std::array<double, 4> k4 = acrobot_derivatives(end, torque);

  std::array<double, 4> out;
  for (int i = 0; i < 4; ++i) {
    out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  out[0] = wrap_angle(out[0]);
  out[1] = wrap_angle(out[1]);
  const double v1 = 4.0 * kPi, v2 = 9.0 * kPi;
  out[2] = std::clamp(out[2], -v1, v1);
  out[3] = std::clamp(out[3], -v2, v2);
  return out;
}

}  // namespace oracle
