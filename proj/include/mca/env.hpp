#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mca/kinematics.hpp"
#include "mca/reward.hpp"
#include "mca/trajectory.hpp"

namespace mca::env {

// per-channel normalization constants, raw value / scale -> observation
struct ObservationScales {
  double x = 1.0;        // m
  double v = 1.0;        // m/s
  double a = 3.0;        // m/s^2
  double f = 3.0;        // m/s^2
  double phi = reward::kPi / 2.0;  // rad
  double omega = 0.3;    // rad/s
  double f_v = 3.0;      // m/s^2
  double omega_v = 0.3;  // rad/s
};

struct EpisodeConfig {
  double dt = 0.012;
  int steps_per_section = 1667;  // 20.004 s per section
  int sections_per_episode = 5;
  ObservationScales scales;
  kinematics::ActionLimits limits;
  reward::RewardWeights weights;
  trajectory::SampleBounds bounds;
  trajectory::RollModel roll;
};

// order: x, v, a, f, phi, omega, f_v_next, omega_v_next
using Observation = std::array<double, 8>;

struct StepResult {
  Observation obs{};
  double reward = 0.0;
  bool done = false;
  reward::RewardBreakdown breakdown;
};

// Minimal MDP surface the trainer drives. Observations/actions are plain
// vectors so environments with different shapes (e.g. test canaries) plug in.
class EnvBase {
 public:
  virtual ~EnvBase() = default;
  virtual int obs_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  // action components are clamped to [-1, 1] by the environment
  virtual void step(std::span<const double> action, std::vector<double>& obs, double& reward,
                    bool& done) = 0;
};

// The motion-platform MDP: kinematics + sampled reference + reward, with the
// five-section episode structure. The platform is not reset between sections.
class McaEnv : public EnvBase {
 public:
  explicit McaEnv(EpisodeConfig config = {});

  int obs_dim() const override { return 8; }
  int action_dim() const override { return 2; }
  std::vector<double> reset(std::uint64_t seed) override;
  void step(std::span<const double> action, std::vector<double>& obs, double& reward,
            bool& done) override;

  // typed interface
  Observation reset_episode(std::uint64_t seed);
  // evaluation mode: run against an externally supplied reference
  Observation reset_with(trajectory::ReferenceTrajectory ref);
  StepResult step_typed(const std::array<double, 2>& action);

  const kinematics::PlatformState& state() const { return state_; }
  const trajectory::ReferenceTrajectory& reference() const { return ref_; }
  const EpisodeConfig& config() const { return config_; }
  long long step_count() const { return step_count_; }
  long long total_steps() const { return total_steps_; }
  bool done() const { return done_; }
  // the action applied on the last step, after clamping and scaling
  const kinematics::RateAction& last_action() const { return last_action_; }

  Observation observe() const;
  static kinematics::PlatformState denormalize(const Observation& obs,
                                               const ObservationScales& scales);

 private:
  EpisodeConfig config_;
  kinematics::PlatformState state_;
  trajectory::ReferenceTrajectory ref_;
  long long step_count_ = 0;
  long long total_steps_ = 0;
  bool done_ = true;
  kinematics::RateAction last_action_;
};

// trace export: one row per executed step
struct TraceRow {
  double t, x, v, a, f, phi, omega, f_v, omega_v, action_a, action_w, reward;
  bool done;
};
void write_trace_csv(std::span<const TraceRow> rows, const std::string& path);
void write_breakdown_csv(std::span<const reward::RewardBreakdown> rows, double dt,
                         const std::string& path);

}  // namespace mca::env
