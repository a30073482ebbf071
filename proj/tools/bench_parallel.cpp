// Times the OpenMP kernels against their serial paths and checks that both
// produce identical results: rollout collection, minibatch gradient
// accumulation (one full update phase), and the washout multistart.

#include <cstdio>
#include <string>

#include "mca/config.hpp"
#include "mca/parallel.hpp"
#include "mca/ppo.hpp"
#include "mca/trajectory.hpp"
#include "mca/washout.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return 0.0;
#endif
}

double checksum(const mca::nn::Mlp& net) {
  double s = 0.0;
  for (const auto& w : net.weights)
    for (double v : w) s += v;
  for (const auto& b : net.biases)
    for (double v : b) s += v;
  for (double v : net.log_std) s += v;
  return s;
}

struct TrainTimes {
  double rollout = 0.0, update = 0.0, checksum = 0.0;
};

TrainTimes run_training(bool serial, int iterations) {
  mca::config::RunConfig cfg = mca::config::defaults();
  cfg.ppo.batch = 8192;
  cfg.ppo.minibatch = 512;
  cfg.ppo.n_envs = 16;
  cfg.ppo.epochs = 4;
  cfg.ppo.serial = serial;
  cfg.ppo.total_steps = static_cast<long long>(cfg.ppo.batch) * iterations;

  mca::ppo::Trainer trainer(
      [episode = cfg.episode](std::uint64_t) { return std::make_unique<mca::env::McaEnv>(episode); },
      cfg.ppo, 7);

  TrainTimes t;
  for (int i = 0; i < iterations; ++i) {
    double t0 = now();
    trainer.collect_rollout();
    t.rollout += now() - t0;
    t0 = now();
    trainer.update_phase();
    t.update += now() - t0;
  }
  t.checksum = checksum(trainer.policy()) + checksum(trainer.value());
  return t;
}

struct WashoutTimes {
  double seconds = 0.0, cost = 0.0;
};

WashoutTimes run_washout(bool serial) {
  const auto ref = mca::trajectory::iso_double_lane_change(10.0, 0.012);
  mca::washout::OptimizeSettings settings;
  settings.starts = 32;
  settings.seed = 11;
  settings.serial = serial;
  settings.local.max_iters = 200;

  const double t0 = now();
  const auto result = mca::washout::cw_optimize(ref, mca::washout::default_bounds(), settings);
  return {now() - t0, result.cost};
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", mca::parallel::max_threads());
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial (s)", "openmp (s)", "speedup");

  const TrainTimes serial = run_training(true, 3);
  const TrainTimes parallel = run_training(false, 3);
  std::printf("%-28s %12.3f %12.3f %8.2fx\n", "ppo rollout collection", serial.rollout,
              parallel.rollout, serial.rollout / parallel.rollout);
  std::printf("%-28s %12.3f %12.3f %8.2fx\n", "ppo gradient update", serial.update,
              parallel.update, serial.update / parallel.update);
  const bool train_match = serial.checksum == parallel.checksum;
  std::printf("  trained weights identical: %s (checksum %.17g)\n",
              train_match ? "yes" : "NO", parallel.checksum);

  const WashoutTimes w_serial = run_washout(true);
  const WashoutTimes w_parallel = run_washout(false);
  std::printf("%-28s %12.3f %12.3f %8.2fx\n", "washout multistart", w_serial.seconds,
              w_parallel.seconds, w_serial.seconds / w_parallel.seconds);
  const bool washout_match = w_serial.cost == w_parallel.cost;
  std::printf("  optimized cost identical:  %s (cost %.17g)\n",
              washout_match ? "yes" : "NO", w_parallel.cost);

  return train_match && washout_match ? 0 : 1;
}
