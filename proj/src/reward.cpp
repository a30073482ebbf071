#include "mca/reward.hpp"

#include <cmath>

namespace mca::reward {

RewardBreakdown compute_reward(const kinematics::PlatformState& state,
                               const kinematics::RateAction& action, double ref_f,
                               double ref_omega, const RewardWeights& w) {
  RewardBreakdown b;
  b.r_f = w.w_f * std::fabs(state.f - ref_f);

  const double omega_err = std::fabs(state.omega - ref_omega);
  b.r_omega = omega_err <= w.omega_pt ? 0.0 : w.w_omega * omega_err;

  b.r_x = w.w_x * std::fabs(state.x);
  b.r_da = w.w_da * std::fabs(action.delta_a);
  b.r_domega = w.w_domega * std::fabs(action.delta_omega);

  b.r_ws_x = std::fabs(state.x) >= w.x_max ? w.r_limit : 0.0;
  b.r_ws_phi = std::fabs(state.phi) >= w.phi_limit ? w.r_limit : 0.0;
  b.terminated = b.r_ws_x > 0.0 || b.r_ws_phi > 0.0;

  b.total = 1.0 - b.r_f - b.r_omega - b.r_x - b.r_da - b.r_domega - b.r_ws_x - b.r_ws_phi;
  return b;
}

}  // namespace mca::reward
