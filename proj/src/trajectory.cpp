#include "mca/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mca/errors.hpp"
#include "mca/rng.hpp"

namespace mca::trajectory {

namespace {

constexpr double kPeakCoeff = 5.7735026918962584;  // 10/sqrt(3)

void validate(const LaneChangeSpec& spec, double total_len) {
  if (!(spec.displacement > 0.0) || !(spec.duration > 0.0))
    throw std::invalid_argument("LaneChangeSpec: displacement and duration must be positive");
  if (spec.direction != 1 && spec.direction != -1)
    throw std::invalid_argument("LaneChangeSpec: direction must be +1 or -1");
  if (spec.t_start < 0.0 || spec.t_start + spec.duration > total_len)
    throw std::invalid_argument("LaneChangeSpec: maneuver does not fit the trajectory window");
}

// unit quintic second derivative: d^2/dt^2 [10 tau^3 - 15 tau^4 + 6 tau^5]
double quintic_accel(double tau) {
  return 60.0 * tau - 180.0 * tau * tau + 120.0 * tau * tau * tau;
}

// lateral acceleration y'' of the composed maneuvers at time t
double compose_accel(std::span<const LaneChangeSpec> specs, double t) {
  double a = 0.0;
  for (const auto& s : specs) {
    if (t < s.t_start || t > s.t_start + s.duration) continue;
    const double tau = (t - s.t_start) / s.duration;
    // displacement is toward -direction in this axis convention, which puts
    // the first specific-force lobe (f = -y'') at +direction
    a += -s.direction * s.displacement * quintic_accel(tau) / (s.duration * s.duration);
  }
  return a;
}

}  // namespace

double quintic_peak_accel(double displacement, double duration) {
  return kPeakCoeff * displacement / (duration * duration);
}

double duration_for_displacement(double displacement, const SampleBounds& b) {
  const double span = b.d_max - b.d_min;
  const double frac = span > 0.0 ? (displacement - b.d_min) / span : 0.0;
  const double peak = b.peak_min + (b.peak_max - b.peak_min) * frac;
  return std::sqrt(kPeakCoeff * displacement / peak);
}

ReferenceTrajectory compose_profile(std::span<const LaneChangeSpec> specs, double dt,
                                    double total_len, const RollModel& roll) {
  if (!(dt > 0.0)) throw std::invalid_argument("compose_profile: dt must be positive");
  for (const auto& s : specs) validate(s, total_len);

  const std::size_t n = static_cast<std::size_t>(std::llround(total_len / dt)) + 1;
  ReferenceTrajectory traj;
  traj.dt = dt;
  traj.f_v.resize(n);
  traj.omega_v.resize(n);

  // Vehicle roll: first-order lag on k_roll * f_v. The body leans outward,
  // toward the side the specific force points, the same sense a platform
  // tilts for tilt coordination under f = g - a.
  const double lag = 1.0 - std::exp(-dt / roll.tau_roll);
  double phi_prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double accel = compose_accel(specs, t);
    traj.f_v[i] = -accel;
    const double phi = phi_prev + lag * (roll.k_roll * traj.f_v[i] - phi_prev);
    traj.omega_v[i] = i == 0 ? 0.0 : (phi - phi_prev) / dt;
    phi_prev = phi;
  }
  return traj;
}

ReferenceTrajectory lane_change_profile(const LaneChangeSpec& spec, double dt, double total_len,
                                        const RollModel& roll) {
  if (total_len < 0.0) total_len = spec.t_start + spec.duration + 2.0;
  return compose_profile(std::span(&spec, 1), dt, total_len, roll);
}

LaneChangeSpec sample_lane_change(std::uint64_t seed, double section_len,
                                  const SampleBounds& bounds) {
  Rng rng(seed);
  LaneChangeSpec spec;
  spec.displacement = rng.uniform(bounds.d_min, bounds.d_max);
  spec.duration = duration_for_displacement(spec.displacement, bounds);
  spec.direction = rng.sign();
  const double t_hi = std::min(bounds.t_start_max, section_len - spec.duration);
  if (t_hi < bounds.t_start_min)
    throw std::invalid_argument("sample_lane_change: section too short for the maneuver window");
  spec.t_start = rng.uniform(bounds.t_start_min, t_hi);
  spec.speed = 8.0;
  return spec;
}

ReferenceTrajectory sample_training_section(std::uint64_t seed, double section_len, double dt,
                                            const SampleBounds& bounds, const RollModel& roll) {
  const LaneChangeSpec spec = sample_lane_change(seed, section_len, bounds);
  return compose_profile(std::span(&spec, 1), dt, section_len, roll);
}

ReferenceTrajectory sample_episode(std::uint64_t seed, int n_sections, double section_len,
                                   double dt, const SampleBounds& bounds, const RollModel& roll) {
  if (n_sections <= 0) throw std::invalid_argument("sample_episode: n_sections must be positive");
  std::vector<LaneChangeSpec> specs;
  specs.reserve(n_sections);
  for (int k = 0; k < n_sections; ++k) {
    LaneChangeSpec s = sample_lane_change(mix_seed(seed, static_cast<std::uint64_t>(k)),
                                          section_len, bounds);
    s.t_start += static_cast<double>(k) * section_len;
    specs.push_back(s);
  }
  return compose_profile(specs, dt, static_cast<double>(n_sections) * section_len, roll);
}

ReferenceTrajectory iso_double_lane_change(double speed, double dt, double lateral_offset,
                                           const RollModel& roll) {
  if (!(speed > 0.0)) throw std::invalid_argument("iso_double_lane_change: speed must be positive");
  // ISO 3888-1 test track sections (m): entry 15, transition 30, side lane 25,
  // transition 25, exit 15. A trailing second lets the vehicle roll settle.
  const double s1 = 15.0, s2 = 30.0, s3 = 25.0, s4 = 25.0, s5 = 15.0;
  const double tail = 1.0;
  const double total_len = (s1 + s2 + s3 + s4 + s5) / speed + tail;

  LaneChangeSpec out{};
  out.t_start = s1 / speed;
  out.direction = 1;  // conventional (+,-) then (-,+) force lobe signature
  out.displacement = lateral_offset;
  out.duration = s2 / speed;
  out.speed = speed;

  LaneChangeSpec back{};
  back.t_start = (s1 + s2 + s3) / speed;
  back.direction = -1;
  back.displacement = lateral_offset;
  back.duration = s4 / speed;
  back.speed = speed;

  const LaneChangeSpec specs[2] = {out, back};
  return compose_profile(specs, dt, total_len, roll);
}

void write_csv(const ReferenceTrajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "t,f_v,omega_v\n";
  char line[128];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n",
                  static_cast<double>(i) * traj.dt, traj.f_v[i], traj.omega_v[i]);
    out << line;
  }
  if (!out) throw ConfigError("write failed: " + path);
}

ReferenceTrajectory read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,f_v,omega_v")
    throw ConfigError("trajectory csv: bad header in " + path);

  ReferenceTrajectory traj;
  double t_prev = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t, f, w;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &f, &w) != 3)
      throw ConfigError("trajectory csv: malformed row in " + path);
    if (first) {
      first = false;
    } else if (traj.f_v.size() == 1) {
      traj.dt = t - t_prev;
      if (!(traj.dt > 0.0)) throw ConfigError("trajectory csv: non-increasing time column");
    }
    traj.f_v.push_back(f);
    traj.omega_v.push_back(w);
    t_prev = t;
  }
  if (traj.size() < 2) throw ConfigError("trajectory csv: need at least two samples");
  return traj;
}

}  // namespace mca::trajectory
