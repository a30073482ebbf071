#include "mca/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mca/errors.hpp"

namespace mca::env {

McaEnv::McaEnv(EpisodeConfig config) : config_(std::move(config)) {
  if (!(config_.dt > 0.0) || config_.steps_per_section <= 0 || config_.sections_per_episode <= 0)
    throw std::invalid_argument("McaEnv: invalid episode configuration");
}

Observation McaEnv::observe() const {
  const auto& s = config_.scales;
  const auto idx = static_cast<std::size_t>(step_count_) + 1;
  return {state_.x / s.x,         state_.v / s.v,           state_.a / s.a,
          state_.f / s.f,         state_.phi / s.phi,       state_.omega / s.omega,
          ref_.f_at(idx) / s.f_v, ref_.omega_at(idx) / s.omega_v};
}

kinematics::PlatformState McaEnv::denormalize(const Observation& obs,
                                              const ObservationScales& s) {
  kinematics::PlatformState st;
  st.x = obs[0] * s.x;
  st.v = obs[1] * s.v;
  st.a = obs[2] * s.a;
  st.f = obs[3] * s.f;
  st.phi = obs[4] * s.phi;
  st.omega = obs[5] * s.omega;
  return st;
}

Observation McaEnv::reset_episode(std::uint64_t seed) {
  const double section_len = config_.dt * static_cast<double>(config_.steps_per_section);
  ref_ = trajectory::sample_episode(seed, config_.sections_per_episode, section_len, config_.dt,
                                    config_.bounds, config_.roll);
  state_ = kinematics::PlatformState{};
  step_count_ = 0;
  total_steps_ =
      static_cast<long long>(config_.steps_per_section) * config_.sections_per_episode;
  done_ = false;
  last_action_ = {};
  return observe();
}

Observation McaEnv::reset_with(trajectory::ReferenceTrajectory ref) {
  if (ref.size() < 2) throw std::invalid_argument("McaEnv: reference needs at least two samples");
  ref_ = std::move(ref);
  state_ = kinematics::PlatformState{};
  step_count_ = 0;
  total_steps_ = static_cast<long long>(ref_.size()) - 1;
  done_ = false;
  last_action_ = {};
  return observe();
}

StepResult McaEnv::step_typed(const std::array<double, 2>& action) {
  if (done_) throw std::logic_error("McaEnv: step called on a finished episode");

  const kinematics::RateAction raw{
      std::clamp(action[0], -1.0, 1.0) * config_.limits.delta_a_max,
      std::clamp(action[1], -1.0, 1.0) * config_.limits.delta_omega_max};
  last_action_ = raw;
  state_ = kinematics::step(state_, raw, config_.dt);
  ++step_count_;

  const auto idx = static_cast<std::size_t>(step_count_);
  StepResult result;
  result.breakdown =
      reward::compute_reward(state_, raw, ref_.f_at(idx), ref_.omega_at(idx), config_.weights);
  result.reward = result.breakdown.total;
  done_ = result.breakdown.terminated || step_count_ >= total_steps_;
  result.done = done_;
  result.obs = observe();
  return result;
}

std::vector<double> McaEnv::reset(std::uint64_t seed) {
  const Observation obs = reset_episode(seed);
  return std::vector<double>(obs.begin(), obs.end());
}

void McaEnv::step(std::span<const double> action, std::vector<double>& obs, double& reward,
                  bool& done) {
  if (action.size() != 2) throw std::invalid_argument("McaEnv: action must have 2 components");
  const StepResult r = step_typed({action[0], action[1]});
  obs.assign(r.obs.begin(), r.obs.end());
  reward = r.reward;
  done = r.done;
}

void write_trace_csv(std::span<const TraceRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "t,x,v,a,f,phi,omega,f_v,omega_v,action_a,action_w,reward,done\n";
  char line[512];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                  r.t, r.x, r.v, r.a, r.f, r.phi, r.omega, r.f_v, r.omega_v, r.action_a,
                  r.action_w, r.reward, r.done ? 1 : 0);
    out << line;
  }
  if (!out) throw ConfigError("write failed: " + path);
}

void write_breakdown_csv(std::span<const reward::RewardBreakdown> rows, double dt,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "t,r_f,r_omega,r_x,r_da,r_domega,r_ws_x,r_ws_phi,total,terminated\n";
  char line[512];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& b = rows[i];
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                  static_cast<double>(i + 1) * dt, b.r_f, b.r_omega, b.r_x, b.r_da, b.r_domega,
                  b.r_ws_x, b.r_ws_phi, b.total, b.terminated ? 1 : 0);
    out << line;
  }
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace mca::env
