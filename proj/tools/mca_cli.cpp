// Command-line front end: train, eval, baseline, compare, gen-traj.
// Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mca/config.hpp"
#include "mca/errors.hpp"
#include "mca/evaluation.hpp"
#include "mca/metrics.hpp"
#include "mca/parallel.hpp"
#include "mca/ppo.hpp"
#include "mca/washout.hpp"

namespace fs = std::filesystem;
using mca::config::RunConfig;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<long long> steps;
};

RunConfig resolve_config(const CommonOpts& opts) {
  RunConfig cfg = opts.config_path.empty() ? mca::config::defaults()
                                           : mca::config::load(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.steps) cfg.ppo.total_steps = *opts.steps;
  mca::config::finalize(cfg);
  mca::parallel::set_threads(cfg.threads);
  return cfg;
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

mca::ppo::EnvFactory mca_env_factory(const RunConfig& cfg) {
  return [episode = cfg.episode](std::uint64_t) {
    return std::make_unique<mca::env::McaEnv>(episode);
  };
}

int cmd_train(const CommonOpts& opts) {
  const RunConfig cfg = resolve_config(opts);
  mca::config::save(cfg, out_path(opts.out_dir, "config.json"));

  mca::ppo::Trainer trainer(mca_env_factory(cfg), cfg.ppo, cfg.seed);
  const int every = cfg.checkpoint_every;
  trainer.train([&](const mca::ppo::IterationLog& row, const mca::nn::Mlp& policy,
                    const mca::nn::Mlp& value) {
    std::printf("iter %4d  steps %10lld  ep_reward %10.3f  ep_len %7.0f  policy_loss %9.5f  value_loss %12.4f  clip %5.3f\n",
                row.iteration, row.steps, row.mean_ep_reward, row.mean_ep_len, row.policy_loss,
                row.value_loss, row.clip_fraction);
    std::fflush(stdout);
    if (every > 0 && row.iteration % every == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "checkpoint_%06d_policy.bin", row.iteration);
      mca::nn::save_weights(policy, out_path(opts.out_dir, name));
      std::snprintf(name, sizeof(name), "checkpoint_%06d_value.bin", row.iteration);
      mca::nn::save_weights(value, out_path(opts.out_dir, name));
    }
  });

  mca::nn::save_weights(trainer.policy(), out_path(opts.out_dir, "policy.bin"));
  mca::nn::save_weights(trainer.value(), out_path(opts.out_dir, "value.bin"));
  mca::ppo::write_training_log_csv(trainer.log(), out_path(opts.out_dir, "training_log.csv"));
  std::printf("trained %lld steps, outputs in %s\n", trainer.steps_done(), opts.out_dir.c_str());
  return 0;
}

int cmd_eval(const CommonOpts& opts, const std::string& weights_path,
             const std::string& trajectory_path) {
  const RunConfig cfg = resolve_config(opts);
  mca::config::save(cfg, out_path(opts.out_dir, "config.json"));

  const mca::nn::Mlp policy = mca::nn::load_weights(weights_path);
  const auto ref = mca::trajectory::read_csv(trajectory_path);

  const auto run = mca::evaluation::greedy_rollout(policy, cfg.episode, ref);
  const auto outputs =
      mca::evaluation::evaluate_platform(run.platform, ref, cfg.episode.weights);
  mca::evaluation::write_eval_outputs(outputs, run.platform, ref, opts.out_dir);

  std::printf("evaluated %zu steps: total_reward %.3f terminated %d\n", run.trace.size(),
              run.total_reward, run.terminated ? 1 : 0);
  std::printf("trans_pearson %.4f  rot_pearson %.4f  trans_rms %.4f m/s^2  max|x| %.4f m\n",
              outputs.report.trans_pearson, outputs.report.rot_pearson,
              outputs.report.trans_rms, outputs.report.max_x);
  return 0;
}

int cmd_baseline(const CommonOpts& opts, const std::string& trajectory_path) {
  const RunConfig cfg = resolve_config(opts);
  mca::config::save(cfg, out_path(opts.out_dir, "config.json"));

  const auto ref = mca::trajectory::read_csv(trajectory_path);
  const auto result = mca::washout::cw_optimize(ref, mca::washout::default_bounds(), cfg.washout);
  mca::washout::write_result_json(result, cfg.washout, out_path(opts.out_dir, "washout_params.json"));
  if (!result.feasible) {
    std::fprintf(stderr, "baseline: no feasible washout parameters found (|x| limit %.3f m)\n",
                 cfg.washout.x_max);
    return 2;
  }

  const auto platform = mca::washout::cw_run(result.params, ref);
  const auto outputs = mca::evaluation::evaluate_platform(platform, ref, cfg.episode.weights);
  mca::evaluation::write_eval_outputs(outputs, platform, ref, opts.out_dir);

  std::printf("optimized washout: cost %.6g max|x| %.4f m (%d evaluations)\n", result.cost,
              result.max_abs_x, result.evaluations);
  std::printf("trans_pearson %.4f  rot_pearson %.4f  trans_rms %.4f m/s^2\n",
              outputs.report.trans_pearson, outputs.report.rot_pearson,
              outputs.report.trans_rms);
  return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b) {
  const auto a = mca::metrics::read_report(path_a);
  const auto b = mca::metrics::read_report(path_b);

  struct Row {
    const char* name;
    double a, b;
  };
  const Row rows[] = {
      {"trans_rms_ms2", a.trans_rms, b.trans_rms},
      {"rot_rms_degs", a.rot_rms_deg, b.rot_rms_deg},
      {"trans_pearson", a.trans_pearson, b.trans_pearson},
      {"rot_pearson", a.rot_pearson, b.rot_pearson},
      {"trans_exceed_frac", a.trans_exceed_frac, b.trans_exceed_frac},
      {"rot_exceed_frac", a.rot_exceed_frac, b.rot_exceed_frac},
      {"max_abs_x_m", a.max_x, b.max_x},
      {"max_abs_v_ms", a.max_v, b.max_v},
      {"max_abs_a_ms2", a.max_a, b.max_a},
      {"max_abs_phi_rad", a.max_phi, b.max_phi},
      {"max_abs_omega_rads", a.max_omega, b.max_omega},
  };
  std::printf("%-20s %14s %14s %14s\n", "metric", "a", "b", "delta (a-b)");
  for (const auto& r : rows)
    std::printf("%-20s %14.6g %14.6g %14.6g\n", r.name, r.a, r.b, r.a - r.b);
  return 0;
}

int cmd_gen_traj(const CommonOpts& opts, const std::string& kind, const std::string& out_file,
                 double displacement, double duration, double t_start, int direction) {
  const RunConfig cfg = resolve_config(opts);
  mca::trajectory::ReferenceTrajectory traj;
  const double dt = cfg.episode.dt;
  const double section_len = dt * cfg.episode.steps_per_section;

  if (kind == "iso") {
    traj = mca::trajectory::iso_double_lane_change(cfg.iso_speed, dt, cfg.iso_offset,
                                                   cfg.episode.roll);
  } else if (kind == "single") {
    mca::trajectory::LaneChangeSpec spec;
    spec.t_start = t_start;
    spec.direction = direction;
    spec.displacement = displacement;
    spec.duration = duration > 0.0
                        ? duration
                        : mca::trajectory::duration_for_displacement(displacement,
                                                                     cfg.episode.bounds);
    traj = mca::trajectory::lane_change_profile(spec, dt, -1.0, cfg.episode.roll);
  } else if (kind == "section") {
    traj = mca::trajectory::sample_training_section(cfg.seed, section_len, dt,
                                                    cfg.episode.bounds, cfg.episode.roll);
  } else if (kind == "episode") {
    traj = mca::trajectory::sample_episode(cfg.seed, cfg.episode.sections_per_episode,
                                           section_len, dt, cfg.episode.bounds,
                                           cfg.episode.roll);
  } else {
    throw mca::ConfigError("gen-traj: unknown kind '" + kind + "'");
  }

  if (const auto dir = fs::path(out_file).parent_path(); !dir.empty())
    fs::create_directories(dir);
  mca::trajectory::write_csv(traj, out_file);
  std::printf("wrote %zu samples (%.3f s) to %s\n", traj.size(), traj.duration(),
              out_file.c_str());
  return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_steps = false) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration (defaults when omitted)");
  cmd->add_option("--out-dir", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "override the configured seed");
  if (with_steps) cmd->add_option("--steps", opts.steps, "override ppo.total_steps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motion cueing lab: PPO-trained MCA vs optimized classical washout"};
  app.require_subcommand(1);

  CommonOpts train_opts, eval_opts, baseline_opts, gen_opts;
  std::string weights_path, trajectory_path, report_a, report_b;
  std::string kind = "iso", gen_out = "trajectory.csv";
  double displacement = 2.84, duration = -1.0, t_start = 1.0;
  int direction = 1;

  auto* train = app.add_subcommand("train", "train the RL-based MCA");
  add_common(train, train_opts, true);

  auto* eval = app.add_subcommand("eval", "greedy policy rollout on a trajectory CSV");
  add_common(eval, eval_opts);
  eval->add_option("--weights", weights_path, "policy weight file")->required();
  eval->add_option("--trajectory", trajectory_path, "reference trajectory CSV")->required();

  auto* baseline = app.add_subcommand("baseline", "optimize and evaluate the washout baseline");
  add_common(baseline, baseline_opts);
  baseline->add_option("--trajectory", trajectory_path, "reference trajectory CSV")->required();

  auto* compare = app.add_subcommand("compare", "side-by-side table of two report files");
  compare->add_option("report_a", report_a, "first report.txt")->required();
  compare->add_option("report_b", report_b, "second report.txt")->required();

  auto* gen = app.add_subcommand("gen-traj", "export reference trajectory CSVs");
  add_common(gen, gen_opts);
  gen->add_option("--kind", kind, "iso | single | section | episode");
  gen->add_option("--out", gen_out, "output CSV path");
  gen->add_option("--displacement", displacement, "single: lateral offset D (m)");
  gen->add_option("--duration", duration, "single: maneuver time T (s), derived from D if <= 0");
  gen->add_option("--t-start", t_start, "single: maneuver start time (s)");
  gen->add_option("--direction", direction, "single: +1 or -1");

  try {
    app.parse(argc, argv);
    if (train->parsed()) return cmd_train(train_opts);
    if (eval->parsed()) return cmd_eval(eval_opts, weights_path, trajectory_path);
    if (baseline->parsed()) return cmd_baseline(baseline_opts, trajectory_path);
    if (compare->parsed()) return cmd_compare(report_a, report_b);
    if (gen->parsed())
      return cmd_gen_traj(gen_opts, kind, gen_out, displacement, duration, t_start, direction);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  } catch (const mca::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
