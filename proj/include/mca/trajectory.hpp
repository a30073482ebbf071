#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mca::trajectory {

// One lateral lane-change maneuver. direction is the sign of the initial
// specific-force lobe felt by the driver (the maneuver displaces the vehicle
// toward -direction * displacement in the lateral axis used here).
struct LaneChangeSpec {
  double t_start = 0.0;        // s from trajectory start
  int direction = 1;           // +1 or -1
  double displacement = 2.84;  // lateral offset magnitude D (m)
  double duration = 3.02;      // maneuver time T (s)
  double speed = 8.0;          // longitudinal speed (m/s), metadata only
};

// Vehicle reference signals on a fixed grid: sample i is at t = i*dt.
struct ReferenceTrajectory {
  double dt = 0.012;
  std::vector<double> f_v;      // lateral specific force (m/s^2)
  std::vector<double> omega_v;  // roll rate (rad/s)

  std::size_t size() const { return f_v.size(); }
  double duration() const { return f_v.empty() ? 0.0 : dt * static_cast<double>(f_v.size() - 1); }
  // clamped access: trajectories end at rest, so the last sample extends
  double f_at(std::size_t i) const { return f_v[i < f_v.size() ? i : f_v.size() - 1]; }
  double omega_at(std::size_t i) const {
    return omega_v[i < omega_v.size() ? i : omega_v.size() - 1];
  }
};

// Vehicle roll responds to lateral acceleration through a first-order lag.
struct RollModel {
  double k_roll = 0.0104;  // rad per m/s^2 (~0.6 deg per m/s^2 roll gradient)
  double tau_roll = 0.2;   // s
};

// Training distribution for stochastic single lane changes.
struct SampleBounds {
  double t_start_min = 0.5;  // s
  double t_start_max = 14.0;
  double d_min = 1.0;  // m
  double d_max = 4.0;
  double peak_min = 0.6;  // m/s^2, peak |f_v| window mapped affinely onto [d_min, d_max]
  double peak_max = 2.2;
};

// peak |y''| of the quintic profile y = D q(tau): (10/sqrt(3)) D / T^2
double quintic_peak_accel(double displacement, double duration);

// maneuver duration giving the target peak via the affine peak(D) calibration
double duration_for_displacement(double displacement, const SampleBounds& bounds);

ReferenceTrajectory lane_change_profile(const LaneChangeSpec& spec, double dt,
                                        double total_len = -1.0, const RollModel& roll = {});

// multiple maneuvers rendered in a single pass (shared roll-lag state)
ReferenceTrajectory compose_profile(std::span<const LaneChangeSpec> specs, double dt,
                                    double total_len, const RollModel& roll = {});

LaneChangeSpec sample_lane_change(std::uint64_t seed, double section_len,
                                  const SampleBounds& bounds = {});

// one training section: a single stochastic lane change in a section_len window
ReferenceTrajectory sample_training_section(std::uint64_t seed, double section_len, double dt,
                                            const SampleBounds& bounds = {},
                                            const RollModel& roll = {});

// n_sections stochastic lane changes back to back (one roll-lag pass)
ReferenceTrajectory sample_episode(std::uint64_t seed, int n_sections, double section_len,
                                   double dt, const SampleBounds& bounds = {},
                                   const RollModel& roll = {});

// ISO 3888-1 double lane change traversed at constant speed. Section lengths
// 15/30/25/25/15 m, 3.5 m lateral offset between the entry and side lanes.
ReferenceTrajectory iso_double_lane_change(double speed, double dt, double lateral_offset = 3.5,
                                           const RollModel& roll = {});

// CSV round trip, header "t,f_v,omega_v", >= 9 significant digits
void write_csv(const ReferenceTrajectory& traj, const std::string& path);
ReferenceTrajectory read_csv(const std::string& path);

}  // namespace mca::trajectory
