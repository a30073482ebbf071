#pragma once

#include <span>
#include <string>

#include "mca/kinematics.hpp"
#include "mca/reward.hpp"
#include "mca/trajectory.hpp"
#include "mca/vestibular.hpp"

namespace mca::metrics {

struct EvalThresholds {
  double trans = 0.17;                           // m/s^2, lateral perception threshold
  double rot = 3.0 * reward::kPi / 180.0;        // rad/s, roll perception threshold
};

struct ComparisonReport {
  double trans_rms = 0.0;     // sensed translational RMS error (m/s^2)
  double rot_rms = 0.0;       // sensed rotational RMS error (rad/s)
  double rot_rms_deg = 0.0;   // same, deg/s
  double trans_pearson = 0.0;
  double rot_pearson = 0.0;
  double trans_exceed_frac = 0.0;  // fraction of samples above the threshold
  double rot_exceed_frac = 0.0;
  double max_x = 0.0, max_v = 0.0, max_a = 0.0, max_phi = 0.0, max_omega = 0.0;
};

// sample Pearson correlation; throws MetricError when either signal is constant
double pearson(std::span<const double> a, std::span<const double> b);

double rms_error(std::span<const double> a, std::span<const double> b);

// Pass platform and reference signals through the vestibular models, then
// compare: RMS errors, correlations, threshold exceedance, workspace maxima.
ComparisonReport evaluate_mca(const kinematics::PlatformTrajectory& platform,
                              const trajectory::ReferenceTrajectory& ref,
                              const EvalThresholds& thresholds = {},
                              const vestibular::Coefficients& coeffs = {});

// flat key-value text file plus a one-row CSV for cross-run tables
void write_report(const ComparisonReport& report, const std::string& path);
void write_report_csv(const ComparisonReport& report, const std::string& path);
ComparisonReport read_report(const std::string& path);  // throws ConfigError on missing keys

}  // namespace mca::metrics
