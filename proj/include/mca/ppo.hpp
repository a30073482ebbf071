#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mca/env.hpp"
#include "mca/nn.hpp"

namespace mca::ppo {

struct PpoConfig {
  double gamma = 0.999;
  double gae_lambda = 0.95;
  double clip = 0.2;
  int epochs = 10;
  int minibatch = 512;            // paper scale: 2^11
  int batch = 16384;              // paper scale: 2^18
  long long total_steps = 2'000'000;  // paper scale: 57e6
  int n_envs = 16;
  double lr = 3e-4;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;  // per-net gradient clipping, 0 disables
  int hidden = 64;
  double init_log_std = -1.0;
  int grad_shards = 16;  // deterministic reduction width
  bool serial = false;   // force the serial path of the parallel kernels

  void validate() const;
};

// On-policy batch, one contiguous time slice per environment.
struct RolloutBuffer {
  int obs_dim = 0, act_dim = 0;
  int capacity = 0;
  std::vector<double> obs;        // capacity x obs_dim
  std::vector<double> actions;    // capacity x act_dim
  std::vector<double> log_probs;  // capacity
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;
  std::vector<double> advantages;
  std::vector<double> returns;

  static RolloutBuffer make(int capacity, int obs_dim, int act_dim);
  std::span<const double> obs_row(std::size_t i) const {
    return {obs.data() + i * obs_dim, static_cast<std::size_t>(obs_dim)};
  }
  std::span<const double> action_row(std::size_t i) const {
    return {actions.data() + i * act_dim, static_cast<std::size_t>(act_dim)};
  }
};

// delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t, advantage = discounted
// lambda-sum of deltas, return = advantage + V_t. bootstrap_value stands in
// for V at one past the end of the slice.
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> dones, double bootstrap_value, double gamma,
                 double lambda, std::span<double> advantages_out, std::span<double> returns_out);

struct ClipSample {
  double objective = 0.0;  // min(ratio * A, clip(ratio) * A)
  double dlogp = 0.0;      // d objective / d logp_new
  bool clipped = false;    // |ratio - 1| > eta
};
ClipSample clipped_objective(double logp_new, double logp_old, double advantage, double eta);

struct IterationLog {
  int iteration = 0;
  long long steps = 0;
  double mean_ep_reward = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double clip_fraction = 0.0;
  double entropy = 0.0;
  // diagnostics, not part of the CSV schema
  int episodes_completed = 0;
  double mean_ep_len = 0.0;
};

struct EpisodeRecord {
  long long completed_at_step = 0;
  double total_reward = 0.0;
  long long length = 0;
};

using EnvFactory = std::function<std::unique_ptr<env::EnvBase>(std::uint64_t seed)>;
// called after each update phase; may persist checkpoints
using IterationCallback = std::function<void(const IterationLog&, const nn::Mlp& policy,
                                             const nn::Mlp& value)>;

class Trainer {
 public:
  Trainer(EnvFactory factory, PpoConfig config, std::uint64_t seed);

  // one rollout + update phase; returns the log row
  IterationLog run_iteration();
  void train(const IterationCallback& callback = {});

  const nn::Mlp& policy() const { return policy_; }
  const nn::Mlp& value() const { return value_; }
  const std::vector<IterationLog>& log() const { return log_; }
  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }
  long long steps_done() const { return steps_done_; }
  const RolloutBuffer& buffer() const { return buffer_; }
  const PpoConfig& config() const { return config_; }

  // exposed for the parallel-consistency tests and the benchmark
  void collect_rollout();
  IterationLog update_phase();

 private:
  struct EnvSlot {
    std::unique_ptr<env::EnvBase> env;
    Rng action_rng;
    std::vector<double> obs;
    double episode_reward = 0.0;
    long long episode_len = 0;
    std::uint64_t episode_count = 0;
    std::vector<EpisodeRecord> pending;  // merged in env order after each rollout

    EnvSlot() : action_rng(0) {}
  };

  void reset_slot(EnvSlot& slot, int index);

  EnvFactory factory_;
  PpoConfig config_;
  std::uint64_t seed_;
  nn::Mlp policy_, value_;
  nn::AdamState policy_adam_, value_adam_;
  std::vector<EnvSlot> envs_;
  std::vector<double> bootstrap_;  // per env
  RolloutBuffer buffer_;
  Rng shuffle_rng_;
  std::vector<IterationLog> log_;
  std::vector<EpisodeRecord> episodes_;
  long long steps_done_ = 0;
  int iteration_ = 0;
};

void write_training_log_csv(std::span<const IterationLog> log, const std::string& path);

}  // namespace mca::ppo
