#include "mca/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mca/errors.hpp"
#include "mca/parallel.hpp"

namespace mca::ppo {

void PpoConfig::validate() const {
  if (!(gamma > 0.0) || gamma > 1.0) throw std::invalid_argument("ppo: gamma must be in (0, 1]");
  if (!(clip > 0.0) || clip >= 1.0) throw std::invalid_argument("ppo: clip must be in (0, 1)");
  if (!(gae_lambda >= 0.0) || gae_lambda > 1.0)
    throw std::invalid_argument("ppo: gae_lambda must be in [0, 1]");
  if (batch <= 0 || minibatch <= 0 || batch % minibatch != 0)
    throw std::invalid_argument("ppo: minibatch must divide batch");
  if (n_envs <= 0 || batch % n_envs != 0)
    throw std::invalid_argument("ppo: n_envs must divide batch");
  if (epochs <= 0 || hidden <= 0 || grad_shards <= 0 || total_steps <= 0)
    throw std::invalid_argument("ppo: epochs, hidden, grad_shards, total_steps must be positive");
}

RolloutBuffer RolloutBuffer::make(int capacity, int obs_dim, int act_dim) {
  RolloutBuffer b;
  b.obs_dim = obs_dim;
  b.act_dim = act_dim;
  b.capacity = capacity;
  const auto n = static_cast<std::size_t>(capacity);
  b.obs.assign(n * obs_dim, 0.0);
  b.actions.assign(n * act_dim, 0.0);
  b.log_probs.assign(n, 0.0);
  b.rewards.assign(n, 0.0);
  b.values.assign(n, 0.0);
  b.dones.assign(n, 0);
  b.advantages.assign(n, 0.0);
  b.returns.assign(n, 0.0);
  return b;
}

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> dones, double bootstrap_value, double gamma,
                 double lambda, std::span<double> advantages_out, std::span<double> returns_out) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n || advantages_out.size() != n ||
      returns_out.size() != n)
    throw std::invalid_argument("compute_gae: misaligned sequences");

  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double next_value = (t + 1 < n) ? values[t + 1] : bootstrap_value;
    const double delta = rewards[t] + gamma * next_value * not_done - values[t];
    running = delta + gamma * lambda * not_done * running;
    advantages_out[t] = running;
    returns_out[t] = running + values[t];
  }
}

ClipSample clipped_objective(double logp_new, double logp_old, double advantage, double eta) {
  ClipSample s;
  const double ratio = std::exp(logp_new - logp_old);
  const double clipped_ratio = std::clamp(ratio, 1.0 - eta, 1.0 + eta);
  const double unclipped = ratio * advantage;
  const double clipped = clipped_ratio * advantage;
  if (unclipped <= clipped) {
    s.objective = unclipped;
    s.dlogp = advantage * ratio;  // d(ratio * A)/d logp_new
  } else {
    s.objective = clipped;
    s.dlogp = 0.0;  // clip boundary active, no gradient
  }
  s.clipped = std::fabs(ratio - 1.0) > eta;
  return s;
}

Trainer::Trainer(EnvFactory factory, PpoConfig config, std::uint64_t seed)
    : factory_(std::move(factory)),
      config_(config),
      seed_(seed),
      shuffle_rng_(mix_seed(seed, 0x5u)) {
  config_.validate();
  if (!factory_) throw std::invalid_argument("Trainer: null environment factory");

  envs_.resize(config_.n_envs);
  for (int i = 0; i < config_.n_envs; ++i) {
    envs_[i].env = factory_(mix_seed(seed_, 0x100u + static_cast<std::uint64_t>(i)));
    envs_[i].action_rng = Rng(mix_seed(seed_, 0x200u + static_cast<std::uint64_t>(i)));
    reset_slot(envs_[i], i);
  }
  bootstrap_.assign(config_.n_envs, 0.0);

  const int obs_dim = envs_[0].env->obs_dim();
  const int act_dim = envs_[0].env->action_dim();
  buffer_ = RolloutBuffer::make(config_.batch, obs_dim, act_dim);

  policy_ = nn::Mlp::zeros({obs_dim, config_.hidden, config_.hidden, act_dim}, true);
  value_ = nn::Mlp::zeros({obs_dim, config_.hidden, config_.hidden, 1}, false);
  Rng policy_rng(mix_seed(seed_, 0x3u));
  Rng value_rng(mix_seed(seed_, 0x4u));
  orthogonal_init(policy_, policy_rng, std::sqrt(2.0), 0.01);
  orthogonal_init(value_, value_rng, std::sqrt(2.0), 1.0);
  std::fill(policy_.log_std.begin(), policy_.log_std.end(), config_.init_log_std);

  nn::AdamConfig adam;
  adam.lr = config_.lr;
  policy_adam_ = nn::AdamState::init(policy_, adam);
  value_adam_ = nn::AdamState::init(value_, adam);
}

void Trainer::reset_slot(EnvSlot& slot, int index) {
  const std::uint64_t ep_seed =
      mix_seed(mix_seed(seed_, 0x1000u + static_cast<std::uint64_t>(index)), slot.episode_count);
  slot.obs = slot.env->reset(ep_seed);
  slot.episode_reward = 0.0;
  slot.episode_len = 0;
  ++slot.episode_count;
}

void Trainer::collect_rollout() {
  const int steps_per_env = config_.batch / config_.n_envs;
  const int obs_dim = buffer_.obs_dim;
  const int act_dim = buffer_.act_dim;

  parallel::for_shards(config_.n_envs, config_.serial, [&](int i) {
    EnvSlot& slot = envs_[i];
    slot.pending.clear();
    const std::size_t base = static_cast<std::size_t>(i) * steps_per_env;

    std::vector<double> mean(act_dim), action(act_dim), value_out(1), next_obs;
    for (int t = 0; t < steps_per_env; ++t) {
      const std::size_t row = base + static_cast<std::size_t>(t);
      std::copy(slot.obs.begin(), slot.obs.end(), buffer_.obs.begin() + row * obs_dim);

      nn::forward(policy_, slot.obs, mean);
      nn::gaussian_sample(mean, policy_.log_std, slot.action_rng, action);
      const double logp = nn::gaussian_logprob(mean, policy_.log_std, action);
      nn::forward(value_, slot.obs, value_out);

      double reward = 0.0;
      bool done = false;
      slot.env->step(action, next_obs, reward, done);

      std::copy(action.begin(), action.end(), buffer_.actions.begin() + row * act_dim);
      buffer_.log_probs[row] = logp;
      buffer_.rewards[row] = reward;
      buffer_.values[row] = value_out[0];
      buffer_.dones[row] = done ? 1 : 0;

      slot.episode_reward += reward;
      ++slot.episode_len;
      slot.obs = next_obs;
      if (done) {
        slot.pending.push_back({steps_done_ + static_cast<long long>(t + 1) * config_.n_envs,
                                slot.episode_reward, slot.episode_len});
        reset_slot(slot, i);
      }
    }
    nn::forward(value_, slot.obs, value_out);
    bootstrap_[i] = value_out[0];
  });

  // merge episode records and compute GAE slice by slice, env order fixed
  for (int i = 0; i < config_.n_envs; ++i) {
    for (const auto& rec : envs_[i].pending) episodes_.push_back(rec);
    const std::size_t base = static_cast<std::size_t>(i) * steps_per_env;
    const auto n = static_cast<std::size_t>(steps_per_env);
    compute_gae(std::span(buffer_.rewards).subspan(base, n),
                std::span(buffer_.values).subspan(base, n),
                std::span(buffer_.dones).subspan(base, n), bootstrap_[i], config_.gamma,
                config_.gae_lambda, std::span(buffer_.advantages).subspan(base, n),
                std::span(buffer_.returns).subspan(base, n));
  }
  steps_done_ += config_.batch;
}

namespace {

struct ShardStats {
  double objective_sum = 0.0;
  double value_sq_sum = 0.0;
  long long clipped = 0;
};

void clip_grad_norm(nn::Grads& g, double max_norm) {
  if (max_norm <= 0.0) return;
  double sq = 0.0;
  for (const auto& w : g.weights)
    for (double v : w) sq += v * v;
  for (const auto& b : g.biases)
    for (double v : b) sq += v * v;
  for (double v : g.log_std) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) g.scale(max_norm / norm);
}

}  // namespace

IterationLog Trainer::update_phase() {
  const std::size_t n = static_cast<std::size_t>(config_.batch);

  // normalize advantages to zero mean / unit variance over the whole batch
  double mean = 0.0;
  for (double a : buffer_.advantages) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double a : buffer_.advantages) var += (a - mean) * (a - mean);
  var /= static_cast<double>(n);
  const double stddev = std::sqrt(var);
  for (double& a : buffer_.advantages) {
    a -= mean;
    if (stddev > 1e-12) a /= stddev;
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  const int shards = config_.grad_shards;
  std::vector<nn::Grads> policy_shard(shards), value_shard(shards);
  std::vector<ShardStats> stats_shard(shards);
  for (int s = 0; s < shards; ++s) {
    policy_shard[s] = nn::Grads::zeros_like(policy_);
    value_shard[s] = nn::Grads::zeros_like(value_);
  }
  nn::Grads policy_grads = nn::Grads::zeros_like(policy_);
  nn::Grads value_grads = nn::Grads::zeros_like(value_);

  double policy_loss_sum = 0.0, value_loss_sum = 0.0, clip_frac_sum = 0.0;
  long long minibatches = 0;
  const int act_dim = buffer_.act_dim;

  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    // Fisher-Yates with the deterministic rng (std::shuffle is
    // implementation-defined)
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(shuffle_rng_.uniform() *
                                                         static_cast<double>(n - i));
      std::swap(order[i], order[std::min(j, n - 1)]);
    }

    for (std::size_t mb_start = 0; mb_start < n; mb_start += config_.minibatch) {
      const std::size_t mb_len = std::min<std::size_t>(config_.minibatch, n - mb_start);
      const double inv_mb = 1.0 / static_cast<double>(mb_len);

      for (int s = 0; s < shards; ++s) {
        policy_shard[s].set_zero();
        value_shard[s].set_zero();
        stats_shard[s] = {};
      }

      parallel::for_shards(shards, config_.serial, [&](int s) {
        const auto [lo, hi] = parallel::shard_range(mb_len, s, shards);
        nn::ForwardCache cache;
        std::vector<double> mean_out(act_dim), value_out(1);
        std::vector<double> dmean(act_dim), dlog_std(act_dim), dvalue(1);
        for (std::size_t k = lo; k < hi; ++k) {
          const std::size_t row = order[mb_start + k];
          const auto obs = buffer_.obs_row(row);
          const auto action = buffer_.action_row(row);
          const double adv = buffer_.advantages[row];

          nn::forward(policy_, obs, mean_out, &cache);
          const double logp_new =
              nn::gaussian_logprob(mean_out, policy_.log_std, action);
          const ClipSample clip =
              clipped_objective(logp_new, buffer_.log_probs[row], adv, config_.clip);
          stats_shard[s].objective_sum += clip.objective;
          if (clip.clipped) ++stats_shard[s].clipped;

          // loss = -mean(objective) - entropy_coef * entropy + value term
          const double dlogp_loss = -clip.dlogp * inv_mb;
          nn::gaussian_logprob_backward(mean_out, policy_.log_std, action, dlogp_loss, dmean,
                                        dlog_std);
          nn::backward(policy_, cache, dmean, policy_shard[s]);
          for (int d = 0; d < act_dim; ++d)
            policy_shard[s].log_std[d] += dlog_std[d] - config_.entropy_coef * inv_mb;

          nn::forward(value_, obs, value_out, &cache);
          const double err = value_out[0] - buffer_.returns[row];
          stats_shard[s].value_sq_sum += err * err;
          dvalue[0] = 2.0 * config_.value_coef * err * inv_mb;
          nn::backward(value_, cache, dvalue, value_shard[s]);
        }
      });

      policy_grads.set_zero();
      value_grads.set_zero();
      ShardStats stats;
      for (int s = 0; s < shards; ++s) {
        policy_grads.add(policy_shard[s]);
        value_grads.add(value_shard[s]);
        stats.objective_sum += stats_shard[s].objective_sum;
        stats.value_sq_sum += stats_shard[s].value_sq_sum;
        stats.clipped += stats_shard[s].clipped;
      }

      const double policy_loss = -stats.objective_sum * inv_mb;
      const double value_loss = stats.value_sq_sum * inv_mb;
      if (!std::isfinite(policy_loss) || !std::isfinite(value_loss) ||
          !policy_grads.all_finite() || !value_grads.all_finite()) {
        std::ostringstream msg;
        msg << "ppo: non-finite loss (iteration " << iteration_ << ", epoch " << epoch
            << ", minibatch offset " << mb_start << "): policy_loss=" << policy_loss
            << " value_loss=" << value_loss << " log_std0="
            << (policy_.log_std.empty() ? 0.0 : policy_.log_std[0]);
        throw NumericalError(msg.str());
      }

      clip_grad_norm(policy_grads, config_.max_grad_norm);
      clip_grad_norm(value_grads, config_.max_grad_norm);
      nn::adam_step(policy_, policy_grads, policy_adam_);
      nn::adam_step(value_, value_grads, value_adam_);

      policy_loss_sum += policy_loss;
      value_loss_sum += value_loss;
      clip_frac_sum += static_cast<double>(stats.clipped) * inv_mb;
      ++minibatches;
    }
  }

  IterationLog row;
  row.iteration = ++iteration_;
  row.steps = steps_done_;
  row.policy_loss = policy_loss_sum / static_cast<double>(minibatches);
  row.value_loss = value_loss_sum / static_cast<double>(minibatches);
  row.clip_fraction = clip_frac_sum / static_cast<double>(minibatches);
  row.entropy = nn::gaussian_entropy(policy_.log_std);

  // mean reward of episodes completed during this iteration's rollout
  double ep_sum = 0.0, len_sum = 0.0;
  long long ep_count = 0;
  for (auto it = episodes_.rbegin(); it != episodes_.rend(); ++it) {
    if (it->completed_at_step <= steps_done_ - config_.batch) break;
    ep_sum += it->total_reward;
    len_sum += static_cast<double>(it->length);
    ++ep_count;
  }
  row.mean_ep_reward = ep_count > 0 ? ep_sum / static_cast<double>(ep_count)
                                    : (log_.empty() ? 0.0 : log_.back().mean_ep_reward);
  row.episodes_completed = static_cast<int>(ep_count);
  row.mean_ep_len = ep_count > 0 ? len_sum / static_cast<double>(ep_count) : 0.0;
  log_.push_back(row);
  return row;
}

IterationLog Trainer::run_iteration() {
  collect_rollout();
  return update_phase();
}

void Trainer::train(const IterationCallback& callback) {
  while (steps_done_ < config_.total_steps) {
    const IterationLog row = run_iteration();
    if (callback) callback(row, policy_, value_);
  }
}

void write_training_log_csv(std::span<const IterationLog> log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "iteration,steps,mean_ep_reward,policy_loss,value_loss,clip_fraction,entropy\n";
  char line[256];
  for (const auto& r : log) {
    std::snprintf(line, sizeof(line), "%d,%lld,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.iteration,
                  r.steps, r.mean_ep_reward, r.policy_loss, r.value_loss, r.clip_fraction,
                  r.entropy);
    out << line;
  }
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace mca::ppo
