#pragma once

#include <algorithm>
#include <cmath>
#include <memory>

#include "mca/env.hpp"
#include "mca/ppo.hpp"
#include "mca/rng.hpp"

namespace mca::testsupport {

// 1-D integrator tracking a constant target with a quadratic reward. Small
// enough that PPO has to learn essentially one gain, which makes reward
// improvement a sharp health check of the whole training loop.
class CanaryEnv : public env::EnvBase {
 public:
  static constexpr int kEpisodeLen = 200;
  static constexpr double kGain = 0.05;

  int obs_dim() const override { return 2; }
  int action_dim() const override { return 1; }

  std::vector<double> reset(std::uint64_t seed) override {
    Rng rng(seed);
    x_ = rng.uniform(-1.0, 1.0);
    target_ = rng.uniform(-1.0, 1.0);
    steps_ = 0;
    return {x_, target_};
  }

  void step(std::span<const double> action, std::vector<double>& obs, double& reward,
            bool& done) override {
    const double a = std::clamp(action[0], -1.0, 1.0);
    x_ += kGain * a;
    reward = 1.0 - (x_ - target_) * (x_ - target_);
    ++steps_;
    done = steps_ >= kEpisodeLen;
    obs = {x_, target_};
  }

 private:
  double x_ = 0.0, target_ = 0.0;
  int steps_ = 0;
};

inline mca::ppo::EnvFactory canary_factory() {
  return [](std::uint64_t) { return std::make_unique<CanaryEnv>(); };
}

}  // namespace mca::testsupport
