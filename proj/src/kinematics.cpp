#include "mca/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mca/errors.hpp"

namespace mca::kinematics {

double specific_force(double a, double phi) {
  return kGravity * std::sin(phi) - a * std::cos(phi);
}

RateAction clamp(const RateAction& action, const ActionLimits& limits) {
  return {std::clamp(action.delta_a, -limits.delta_a_max, limits.delta_a_max),
          std::clamp(action.delta_omega, -limits.delta_omega_max, limits.delta_omega_max)};
}

namespace {

bool all_finite(const PlatformState& s) {
  return std::isfinite(s.x) && std::isfinite(s.v) && std::isfinite(s.a) &&
         std::isfinite(s.phi) && std::isfinite(s.omega) && std::isfinite(s.f) &&
         std::isfinite(s.t);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::fabs(e));
  return m;
}

}  // namespace

PlatformState step(const PlatformState& state, const RateAction& action, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("kinematics::step: dt must be positive");
  if (!all_finite(state) || !std::isfinite(action.delta_a) || !std::isfinite(action.delta_omega))
    throw NumericalError("kinematics::step: non-finite state or action");

  PlatformState next;
  next.a = state.a + action.delta_a;
  next.v = state.v + next.a * dt;
  next.x = state.x + next.v * dt;
  next.omega = state.omega + action.delta_omega;
  next.phi = state.phi + next.omega * dt;
  next.f = specific_force(next.a, next.phi);
  next.t = state.t + dt;
  return next;
}

double PlatformTrajectory::max_abs_x() const { return max_abs(x); }
double PlatformTrajectory::max_abs_v() const { return max_abs(v); }
double PlatformTrajectory::max_abs_a() const { return max_abs(a); }
double PlatformTrajectory::max_abs_phi() const { return max_abs(phi); }
double PlatformTrajectory::max_abs_omega() const { return max_abs(omega); }

}  // namespace mca::kinematics
