#pragma once

#include <cstdint>
#include <string>

#include "mca/env.hpp"
#include "mca/ppo.hpp"
#include "mca/washout.hpp"

namespace mca::config {

// Every tunable of the pipeline in one structure. The JSON form mirrors the
// nesting; unknown keys are rejected and defaults fill whatever a file omits.
// The resolved configuration is serialized into every output directory.
struct RunConfig {
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = OpenMP default; 1 = force the serial kernels

  env::EpisodeConfig episode;
  ppo::PpoConfig ppo;
  washout::OptimizeSettings washout;

  double iso_speed = 10.0;    // m/s
  double iso_offset = 3.5;    // m
  int checkpoint_every = 20;  // iterations between checkpoints, 0 = final only
};

RunConfig defaults();
RunConfig load(const std::string& path);  // strict: unknown keys rejected
void save(const RunConfig& config, const std::string& path);
std::string to_json_string(const RunConfig& config);

// wire dependent fields (washout seed, serial-kernel flags) after overrides
void finalize(RunConfig& config);

}  // namespace mca::config
