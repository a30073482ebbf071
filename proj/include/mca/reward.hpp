#pragma once

#include "mca/kinematics.hpp"

namespace mca::reward {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Weights and limits of the seven-component reward. The paper leaves the
// weights to empirical tuning; these defaults are the tuned stand-ins.
struct RewardWeights {
  double w_f = 0.25;      // per m/s^2
  double w_omega = 2.0;   // per rad/s
  double w_x = 0.1;       // per m
  double w_da = 0.5;      // per m/s^2 step
  double w_domega = 0.5;  // per rad/s step
  double r_limit = 100.0;
  double x_max = 1.0;                      // m
  double phi_limit = kPi / 2.0;            // rad
  double omega_pt = 3.0 * kPi / 180.0;     // rad/s, roll perception threshold
};

struct RewardBreakdown {
  double total = 1.0;
  double r_f = 0.0, r_omega = 0.0, r_x = 0.0;
  double r_da = 0.0, r_domega = 0.0;
  double r_ws_x = 0.0, r_ws_phi = 0.0;
  bool terminated = false;
};

// Per-step reward: 1 minus tracking, centering, action and workspace terms.
// Deviation terms use absolute values; the roll tracking term is zero inside
// the perception threshold. Workspace terms fire at |x| >= x_max or
// |phi| >= phi_limit and also set the termination flag.
RewardBreakdown compute_reward(const kinematics::PlatformState& state,
                               const kinematics::RateAction& action, double ref_f,
                               double ref_omega, const RewardWeights& w);

}  // namespace mca::reward
