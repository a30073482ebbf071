#include "mca/evaluation.hpp"

#include <cmath>
#include <filesystem>

#include "mca/errors.hpp"
#include "mca/plot.hpp"

namespace mca::evaluation {

GreedyRun greedy_rollout(const nn::Mlp& policy, const env::EpisodeConfig& config,
                         trajectory::ReferenceTrajectory ref) {
  if (policy.in_dim() != 8 || policy.out_dim() != 2)
    throw ConfigError("greedy_rollout: policy architecture does not match the 8/2 MDP interface");

  env::McaEnv environment(config);
  env::Observation obs = environment.reset_with(std::move(ref));

  GreedyRun run;
  run.platform.dt = config.dt;
  run.platform.push(environment.state());

  std::vector<double> mean(2);
  while (!environment.done()) {
    nn::forward(policy, obs, mean);
    const env::StepResult r = environment.step_typed({mean[0], mean[1]});
    obs = r.obs;

    const auto& s = environment.state();
    const auto& act = environment.last_action();
    const auto idx = static_cast<std::size_t>(environment.step_count());
    run.platform.push(s);
    run.trace.push_back({s.t, s.x, s.v, s.a, s.f, s.phi, s.omega,
                         environment.reference().f_at(idx), environment.reference().omega_at(idx),
                         act.delta_a, act.delta_omega, r.reward, r.done});
    run.breakdowns.push_back(r.breakdown);
    run.total_reward += r.reward;
    if (r.breakdown.terminated) run.terminated = true;
  }
  return run;
}

EvalOutputs evaluate_platform(const kinematics::PlatformTrajectory& platform,
                              const trajectory::ReferenceTrajectory& ref,
                              const reward::RewardWeights& weights,
                              const metrics::EvalThresholds& thresholds,
                              const vestibular::Coefficients& coeffs) {
  EvalOutputs out;
  out.report = metrics::evaluate_mca(platform, ref, thresholds, coeffs);

  // implied per-step rate actions reconstruct the reward a controller
  // producing this trajectory would have received
  for (std::size_t i = 1; i < platform.size(); ++i) {
    kinematics::PlatformState s;
    s.x = platform.x[i];
    s.v = platform.v[i];
    s.a = platform.a[i];
    s.phi = platform.phi[i];
    s.omega = platform.omega[i];
    s.f = platform.f[i];
    s.t = static_cast<double>(i) * platform.dt;
    const kinematics::RateAction act{platform.a[i] - platform.a[i - 1],
                                     platform.omega[i] - platform.omega[i - 1]};
    const auto b = reward::compute_reward(s, act, ref.f_at(i), ref.omega_at(i), weights);
    out.breakdowns.push_back(b);
    out.trace.push_back({s.t, s.x, s.v, s.a, s.f, s.phi, s.omega, ref.f_at(i), ref.omega_at(i),
                         act.delta_a, act.delta_omega, b.total, false});
  }
  return out;
}

void write_eval_outputs(const EvalOutputs& outputs, const kinematics::PlatformTrajectory& platform,
                        const trajectory::ReferenceTrajectory& ref, const std::string& out_dir,
                        const metrics::EvalThresholds& thresholds,
                        const vestibular::Coefficients& coeffs) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

  env::write_trace_csv(outputs.trace, path("trace.csv"));
  env::write_breakdown_csv(outputs.breakdowns, platform.dt, path("breakdown.csv"));
  metrics::write_report(outputs.report, path("report.txt"));
  metrics::write_report_csv(outputs.report, path("report.csv"));

  const std::size_t n = platform.size();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * platform.dt;

  const double deg = 180.0 / reward::kPi;
  const std::vector<double> sf_p = vestibular::sense_translation(platform.f, platform.dt, coeffs);
  const std::vector<double> sf_r = vestibular::sense_translation(ref.f_v, ref.dt, coeffs);
  std::vector<double> sw_p = vestibular::sense_rotation(platform.omega, platform.dt, coeffs);
  std::vector<double> sw_r = vestibular::sense_rotation(ref.omega_v, ref.dt, coeffs);
  for (double& v : sw_p) v *= deg;
  for (double& v : sw_r) v *= deg;

  {
    plot::Panel a_force{"sensed lateral specific force", "f (m/s^2)", t,
                        {{"reference", sf_r, "#333333"}, {"mca", sf_p, "#d62728"}},
                        {}};
    plot::Panel b_rot{"sensed roll rate", "omega (deg/s)", t,
                      {{"reference", sw_r, "#333333"}, {"mca", sw_p, "#d62728"}},
                      {}};
    const plot::Panel panels[2] = {a_force, b_rot};
    plot::write_svg(panels, path("sensed_signals.svg"));
  }
  {
    std::vector<double> ef(n), ew(n);
    for (std::size_t i = 0; i < n; ++i) {
      ef[i] = sf_p[i] - sf_r[i];
      ew[i] = sw_p[i] - sw_r[i];
    }
    plot::Panel a{"sensed force error", "error (m/s^2)", t, {{"error", ef, "#d62728"}},
                  {thresholds.trans, -thresholds.trans}};
    plot::Panel b{"sensed roll-rate error", "error (deg/s)", t, {{"error", ew, "#d62728"}},
                  {thresholds.rot * deg, -thresholds.rot * deg}};
    const plot::Panel panels[2] = {a, b};
    plot::write_svg(panels, path("sensed_errors.svg"));
  }
  {
    std::vector<double> phi_deg(n), omega_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
      phi_deg[i] = platform.phi[i] * deg;
      omega_deg[i] = platform.omega[i] * deg;
    }
    const plot::Panel panels[5] = {
        {"platform position", "x (m)", t, {{"x", platform.x, "#1f77b4"}}, {}},
        {"platform velocity", "v (m/s)", t, {{"v", platform.v, "#1f77b4"}}, {}},
        {"platform acceleration", "a (m/s^2)", t, {{"a", platform.a, "#1f77b4"}}, {}},
        {"platform roll", "phi (deg)", t, {{"phi", phi_deg, "#1f77b4"}}, {}},
        {"platform roll rate", "omega (deg/s)", t, {{"omega", omega_deg, "#1f77b4"}}, {}}};
    plot::write_svg(panels, path("platform_states.svg"));
  }
}

}  // namespace mca::evaluation
