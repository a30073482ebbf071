#pragma once

#include <cstddef>
#include <vector>

namespace mca::kinematics {

inline constexpr double kGravity = 9.81;  // m/s^2

// Full kinematic state of the simulated platform end effector (sway + roll).
// f is kept consistent with a and phi via specific_force().
struct PlatformState {
  double x = 0.0;      // lateral position (m)
  double v = 0.0;      // lateral velocity (m/s)
  double a = 0.0;      // lateral acceleration (m/s^2)
  double phi = 0.0;    // roll angle (rad)
  double omega = 0.0;  // roll rate (rad/s)
  double f = 0.0;      // lateral specific force in the tilted body frame (m/s^2)
  double t = 0.0;      // simulation time (s)
};

// Rate-of-change action: increments applied to a and omega each step.
struct RateAction {
  double delta_a = 0.0;      // m/s^2 per step
  double delta_omega = 0.0;  // rad/s per step
};

struct ActionLimits {
  double delta_a_max = 0.12;        // ~10 m/s^3 jerk at 12 ms steps
  double delta_omega_max = 4.2e-3;  // ~20 deg/s^2 angular acceleration
};

// Lateral component of g - a expressed in the tilted body frame.
double specific_force(double a, double phi);

RateAction clamp(const RateAction& action, const ActionLimits& limits);

// Semi-implicit Euler, acceleration first:
//   a' = a + da;  v' = v + a' dt;  x' = x + v' dt
//   w' = w + dw;  phi' = phi + w' dt
// Throws NumericalError on non-finite inputs.
PlatformState step(const PlatformState& state, const RateAction& action, double dt);

// Time series of platform states, column layout for filtering and metrics.
struct PlatformTrajectory {
  double dt = 0.012;
  std::vector<double> x, v, a, phi, omega, f;

  std::size_t size() const { return x.size(); }
  void push(const PlatformState& s) {
    x.push_back(s.x);
    v.push_back(s.v);
    a.push_back(s.a);
    phi.push_back(s.phi);
    omega.push_back(s.omega);
    f.push_back(s.f);
  }
  double max_abs_x() const;
  double max_abs_v() const;
  double max_abs_a() const;
  double max_abs_phi() const;
  double max_abs_omega() const;
};

}  // namespace mca::kinematics
