#pragma once

#include <string>
#include <vector>

#include "mca/env.hpp"
#include "mca/metrics.hpp"
#include "mca/nn.hpp"
#include "mca/trajectory.hpp"

namespace mca::evaluation {

// Deterministic greedy rollout: the policy mean drives the environment, no
// sampling. The platform trajectory includes the initial rest sample so it
// aligns 1:1 with the reference grid.
struct GreedyRun {
  kinematics::PlatformTrajectory platform;
  std::vector<env::TraceRow> trace;
  std::vector<reward::RewardBreakdown> breakdowns;
  double total_reward = 0.0;
  bool terminated = false;  // workspace violation before the reference ended
};

GreedyRun greedy_rollout(const nn::Mlp& policy, const env::EpisodeConfig& config,
                         trajectory::ReferenceTrajectory ref);

// Evaluation bundle for any platform trajectory (RL rollout or washout):
// comparison report plus trace rows with the implied per-step rate actions.
struct EvalOutputs {
  metrics::ComparisonReport report;
  std::vector<env::TraceRow> trace;
  std::vector<reward::RewardBreakdown> breakdowns;
};

EvalOutputs evaluate_platform(const kinematics::PlatformTrajectory& platform,
                              const trajectory::ReferenceTrajectory& ref,
                              const reward::RewardWeights& weights,
                              const metrics::EvalThresholds& thresholds = {},
                              const vestibular::Coefficients& coeffs = {});

// trace.csv, breakdown.csv, report.txt, report.csv and the three figure SVGs
void write_eval_outputs(const EvalOutputs& outputs, const kinematics::PlatformTrajectory& platform,
                        const trajectory::ReferenceTrajectory& ref, const std::string& out_dir,
                        const metrics::EvalThresholds& thresholds = {},
                        const vestibular::Coefficients& coeffs = {});

}  // namespace mca::evaluation
