#include <doctest.h>

#include <cmath>
#include <limits>

#include "mca/errors.hpp"
#include "mca/kinematics.hpp"

using namespace mca::kinematics;

TEST_CASE("zero state, zero action advances time only") {
  PlatformState s;
  const PlatformState next = step(s, {}, 0.012);
  CHECK(next.x == 0.0);
  CHECK(next.v == 0.0);
  CHECK(next.a == 0.0);
  CHECK(next.phi == 0.0);
  CHECK(next.omega == 0.0);
  CHECK(next.f == 0.0);
  CHECK(next.t == doctest::Approx(0.012));
}

TEST_CASE("one hand-computed Euler step, translation") {
  const PlatformState next = step({}, {0.1, 0.0}, 0.012);
  CHECK(next.a == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(next.v == doctest::Approx(0.0012).epsilon(1e-12));
  CHECK(next.x == doctest::Approx(1.44e-5).epsilon(1e-12));
}

TEST_CASE("one hand-computed Euler step, roll") {
  const PlatformState next = step({}, {0.0, 0.05}, 0.012);
  CHECK(next.omega == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(next.phi == doctest::Approx(6e-4).epsilon(1e-12));
  CHECK(next.f == doctest::Approx(kGravity * std::sin(6e-4)).epsilon(1e-12));
}

TEST_CASE("specific force examples") {
  CHECK(specific_force(0.0, 0.0) == 0.0);
  CHECK(specific_force(0.0, M_PI / 6.0) == doctest::Approx(4.905).epsilon(1e-9));
  CHECK(specific_force(1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("state f stays consistent with specific_force") {
  PlatformState s;
  for (int i = 0; i < 50; ++i) {
    s = step(s, {0.01 * ((i % 5) - 2), 0.002 * ((i % 3) - 1)}, 0.012);
    CHECK(s.f == specific_force(s.a, s.phi));
  }
}

TEST_CASE("non-finite input rejected") {
  PlatformState s;
  s.v = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step(s, {}, 0.012), mca::NumericalError);
  CHECK_THROWS_AS(step({}, {std::numeric_limits<double>::infinity(), 0.0}, 0.012),
                  mca::NumericalError);
  CHECK_THROWS_AS(step({}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("action clamping") {
  const ActionLimits limits;
  const RateAction c = clamp({1.0, -1.0}, limits);
  CHECK(c.delta_a == limits.delta_a_max);
  CHECK(c.delta_omega == -limits.delta_omega_max);
  const RateAction inside = clamp({0.01, 0.001}, limits);
  CHECK(inside.delta_a == 0.01);
  CHECK(inside.delta_omega == 0.001);
}

TEST_CASE("washout-free drift: zero actions leave x and phi constant") {
  PlatformState s;
  s.x = 0.5;
  s.phi = 0.3;
  for (int i = 0; i < 100; ++i) s = step(s, {}, 0.012);
  CHECK(s.x == 0.5);
  CHECK(s.phi == 0.3);
}

TEST_CASE("integration is linear in the action for the rate channels") {
  PlatformState s;
  s.x = 0.1;
  s.v = -0.2;
  s.a = 0.05;
  s.omega = 0.01;
  s.f = specific_force(s.a, s.phi);
  const PlatformState base = step(s, {}, 0.012);
  const PlatformState one = step(s, {0.02, 0.001}, 0.012);
  const PlatformState three = step(s, {0.06, 0.003}, 0.012);
  CHECK(three.a - base.a == doctest::Approx(3.0 * (one.a - base.a)).epsilon(1e-12));
  CHECK(three.omega - base.omega == doctest::Approx(3.0 * (one.omega - base.omega)).epsilon(1e-12));
}

TEST_CASE("tilt coordination equivalence for a stationary platform") {
  for (double f = -9.0; f <= 9.0; f += 0.75)
    CHECK(specific_force(0.0, std::asin(f / kGravity)) == doctest::Approx(f).epsilon(1e-12));
}

TEST_CASE("action then its negation restores a and omega exactly") {
  // dyadic state and action values stay exact under add/subtract
  PlatformState s;
  s.a = 0.5;
  s.omega = 0.25;
  s.f = specific_force(s.a, s.phi);
  const RateAction fwd{0.125, 0.0625};
  PlatformState mid = step(s, fwd, 0.012);
  PlatformState back = step(mid, {-fwd.delta_a, -fwd.delta_omega}, 0.012);
  CHECK(back.a == s.a);
  CHECK(back.omega == s.omega);
}

TEST_CASE("platform trajectory maxima") {
  PlatformTrajectory traj;
  PlatformState s;
  traj.push(s);
  s.x = -2.0;
  s.omega = 0.5;
  traj.push(s);
  CHECK(traj.max_abs_x() == 2.0);
  CHECK(traj.max_abs_omega() == 0.5);
  CHECK(traj.size() == 2);
}
