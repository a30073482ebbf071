#include <doctest.h>

#include <cmath>

#include "mca/kinematics.hpp"
#include "mca/reward.hpp"
#include "mca/rng.hpp"

using namespace mca::reward;
using mca::kinematics::PlatformState;
using mca::kinematics::RateAction;

namespace {

PlatformState make_state(double x, double phi, double f, double omega) {
  PlatformState s;
  s.x = x;
  s.phi = phi;
  s.f = f;
  s.omega = omega;
  return s;
}

}  // namespace

TEST_CASE("perfect tracking at the origin gives the maximum reward of 1") {
  const RewardWeights w;
  const auto b = compute_reward(PlatformState{}, RateAction{}, 0.0, 0.0, w);
  CHECK(b.total == 1.0);
  CHECK_FALSE(b.terminated);
}

TEST_CASE("roll error inside the perception threshold is free") {
  const RewardWeights w;
  const double two_deg = 2.0 * kPi / 180.0;
  const auto b = compute_reward(make_state(0, 0, 0, two_deg), RateAction{}, 0.0, 0.0, w);
  CHECK(b.r_omega == 0.0);
  CHECK(b.total == 1.0);
}

TEST_CASE("workspace excursion terminates with the full penalty") {
  RewardWeights w;
  w.r_limit = 100.0;
  const double x = w.x_max + 0.01;
  const auto b = compute_reward(make_state(x, 0, 0, 0), RateAction{}, 0.0, 0.0, w);
  CHECK(b.terminated);
  CHECK(b.r_ws_x == 100.0);
  CHECK(b.total == doctest::Approx(1.0 - 100.0 - w.w_x * x).epsilon(1e-12));
}

TEST_CASE("exact threshold behavior of the roll term") {
  const RewardWeights w;
  const auto at = compute_reward(make_state(0, 0, 0, w.omega_pt), RateAction{}, 0.0, 0.0, w);
  CHECK(at.r_omega == 0.0);
  const double above = w.omega_pt + 1e-9;
  const auto past = compute_reward(make_state(0, 0, 0, above), RateAction{}, 0.0, 0.0, w);
  CHECK(past.r_omega == doctest::Approx(w.w_omega * above).epsilon(1e-12));
}

TEST_CASE("boundary of both workspace limits uses >=") {
  const RewardWeights w;
  const auto at_x = compute_reward(make_state(w.x_max, 0, 0, 0), RateAction{}, 0.0, 0.0, w);
  CHECK(at_x.r_ws_x == w.r_limit);
  CHECK(at_x.terminated);
  const auto at_phi = compute_reward(make_state(0, w.phi_limit, 0, 0), RateAction{}, 0.0, 0.0, w);
  CHECK(at_phi.r_ws_phi == w.r_limit);
  CHECK(at_phi.terminated);
  const auto inside =
      compute_reward(make_state(0.999 * w.x_max, 0.999 * w.phi_limit, 0, 0), RateAction{}, 0, 0, w);
  CHECK_FALSE(inside.terminated);
}

TEST_CASE("action magnitudes are penalized through absolute values") {
  const RewardWeights w;
  const auto pos = compute_reward(PlatformState{}, RateAction{0.1, 0.002}, 0.0, 0.0, w);
  const auto neg = compute_reward(PlatformState{}, RateAction{-0.1, -0.002}, 0.0, 0.0, w);
  CHECK(pos.r_da == doctest::Approx(w.w_da * 0.1));
  CHECK(pos.r_domega == doctest::Approx(w.w_domega * 0.002));
  CHECK(pos.total == neg.total);
}

TEST_CASE("reward is symmetric under a global sign flip") {
  const RewardWeights w;
  mca::Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    PlatformState s = make_state(rng.uniform(-1.5, 1.5), rng.uniform(-2.0, 2.0),
                                 rng.uniform(-5.0, 5.0), rng.uniform(-0.3, 0.3));
    s.v = rng.uniform(-1, 1);
    s.a = rng.uniform(-3, 3);
    const RateAction act{rng.uniform(-0.12, 0.12), rng.uniform(-0.004, 0.004)};
    const double rf = rng.uniform(-3, 3), rw = rng.uniform(-0.2, 0.2);

    PlatformState sm = make_state(-s.x, -s.phi, -s.f, -s.omega);
    sm.v = -s.v;
    sm.a = -s.a;
    const auto a = compute_reward(s, act, rf, rw, w);
    const auto b = compute_reward(sm, {-act.delta_a, -act.delta_omega}, -rf, -rw, w);
    CHECK(a.total == b.total);
    CHECK(a.terminated == b.terminated);
  }
}

TEST_CASE("termination is monotone in |x|") {
  const RewardWeights w;
  bool seen_termination = false;
  for (double x = 0.0; x < 2.0; x += 0.05) {
    const bool term = compute_reward(make_state(x, 0, 0, 0), RateAction{}, 0, 0, w).terminated;
    if (seen_termination) CHECK(term);
    seen_termination = seen_termination || term;
  }
  CHECK(seen_termination);
}

TEST_CASE("breakdown sums to the total") {
  const RewardWeights w;
  mca::Rng rng(123);
  for (int i = 0; i < 100; ++i) {
    PlatformState s = make_state(rng.uniform(-1.2, 1.2), rng.uniform(-1.7, 1.7),
                                 rng.uniform(-5, 5), rng.uniform(-0.3, 0.3));
    const RateAction act{rng.uniform(-0.12, 0.12), rng.uniform(-0.004, 0.004)};
    const auto b = compute_reward(s, act, rng.uniform(-3, 3), rng.uniform(-0.2, 0.2), w);
    const double sum =
        b.r_f + b.r_omega + b.r_x + b.r_da + b.r_domega + b.r_ws_x + b.r_ws_phi;
    CHECK(b.total == doctest::Approx(1.0 - sum).epsilon(1e-12));
    CHECK(b.total <= 1.0);
    CHECK(b.terminated == (b.r_ws_x > 0.0 || b.r_ws_phi > 0.0));
  }
}
