#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "mca/kinematics.hpp"
#include "mca/optim.hpp"
#include "mca/reward.hpp"
#include "mca/trajectory.hpp"
#include "mca/vestibular.hpp"

namespace mca::washout {

// Classical washout parameterization: third-order translational high-pass
// (second-order HP cascaded with a first-order washout) plus a first-order
// low-pass tilt-coordination channel.
struct WashoutParams {
  double k_t = 0.6;       // translational scale (-)
  double omega_hp = 1.5;  // rad/s, HP natural frequency
  double zeta_hp = 1.0;   // HP damping (-)
  double omega_wo = 0.3;  // rad/s, washout break frequency
  double omega_lp = 2.0;  // rad/s, tilt low-pass break frequency
  double k_tilt = 0.6;    // tilt scale (-)
};

inline constexpr double kTiltRateLimit = 3.0 * reward::kPi / 180.0;  // rad/s

// Run the washout over a reference; the translational channel is double
// integrated with the same update order as the platform kinematics, the tilt
// channel is rate limited at the roll perception threshold.
kinematics::PlatformTrajectory cw_run(const WashoutParams& params,
                                      const trajectory::ReferenceTrajectory& ref,
                                      double tilt_rate_limit = kTiltRateLimit);

optim::Bounds default_bounds();

struct OptimizeSettings {
  double w1 = 1.0;  // sensed-force error weight
  double w2 = 1.0;  // sensed-rotation error weight
  double x_max = 1.0;
  int starts = 64;
  std::uint64_t seed = 1;
  bool serial = false;
  optim::NelderMeadSettings local;
  vestibular::Coefficients vestibular;
};

struct OptimizeResult {
  WashoutParams params;
  double cost = 0.0;
  double max_abs_x = 0.0;
  bool feasible = false;
  int evaluations = 0;
};

// Constrained tuning against one recorded trajectory: minimize the weighted
// mean squared sensed-force and sensed-rotation errors subject to the
// platform staying inside |x| < x_max. Infeasible evaluations cost +inf.
OptimizeResult cw_optimize(const trajectory::ReferenceTrajectory& ref, const optim::Bounds& bounds,
                           const OptimizeSettings& settings);

// the optimizer objective, exposed for the random-draw oracle in the tests
double cw_cost(const WashoutParams& params, const trajectory::ReferenceTrajectory& ref,
               std::span<const double> sensed_f_ref, std::span<const double> sensed_w_ref,
               const OptimizeSettings& settings);

WashoutParams params_from_vector(std::span<const double> p);
std::array<double, 6> params_to_vector(const WashoutParams& p);

void write_result_json(const OptimizeResult& result, const OptimizeSettings& settings,
                       const std::string& path);
OptimizeResult read_result_json(const std::string& path);

}  // namespace mca::washout
