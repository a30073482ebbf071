#include "mca/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mca/errors.hpp"

namespace mca::metrics {

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("pearson: need at least two samples");

  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;

  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw MetricError("pearson: correlation undefined for a constant signal");
  return sab / std::sqrt(saa * sbb);
}

double rms_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rms_error: length mismatch");
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(a.size()));
}

ComparisonReport evaluate_mca(const kinematics::PlatformTrajectory& platform,
                              const trajectory::ReferenceTrajectory& ref,
                              const EvalThresholds& thresholds,
                              const vestibular::Coefficients& coeffs) {
  if (platform.size() != ref.size())
    throw std::invalid_argument("evaluate_mca: platform and reference lengths differ");

  const double dt = ref.dt;
  const std::vector<double> sf_p = vestibular::sense_translation(platform.f, dt, coeffs);
  const std::vector<double> sf_r = vestibular::sense_translation(ref.f_v, dt, coeffs);
  const std::vector<double> sw_p = vestibular::sense_rotation(platform.omega, dt, coeffs);
  const std::vector<double> sw_r = vestibular::sense_rotation(ref.omega_v, dt, coeffs);

  ComparisonReport r;
  r.trans_rms = rms_error(sf_p, sf_r);
  r.rot_rms = rms_error(sw_p, sw_r);
  r.rot_rms_deg = r.rot_rms * 180.0 / reward::kPi;
  r.trans_pearson = pearson(sf_p, sf_r);
  r.rot_pearson = pearson(sw_p, sw_r);

  std::size_t n_trans = 0, n_rot = 0;
  for (std::size_t i = 0; i < sf_p.size(); ++i) {
    if (std::fabs(sf_p[i] - sf_r[i]) > thresholds.trans) ++n_trans;
    if (std::fabs(sw_p[i] - sw_r[i]) > thresholds.rot) ++n_rot;
  }
  r.trans_exceed_frac = static_cast<double>(n_trans) / static_cast<double>(sf_p.size());
  r.rot_exceed_frac = static_cast<double>(n_rot) / static_cast<double>(sw_p.size());

  r.max_x = platform.max_abs_x();
  r.max_v = platform.max_abs_v();
  r.max_a = platform.max_abs_a();
  r.max_phi = platform.max_abs_phi();
  r.max_omega = platform.max_abs_omega();
  return r;
}

namespace {

const char* const kReportKeys[] = {
    "trans_rms_ms2",     "rot_rms_rads",     "rot_rms_degs",      "trans_pearson",
    "rot_pearson",       "trans_exceed_frac", "rot_exceed_frac",  "max_abs_x_m",
    "max_abs_v_ms",      "max_abs_a_ms2",    "max_abs_phi_rad",   "max_abs_omega_rads"};

std::vector<double> report_values(const ComparisonReport& r) {
  return {r.trans_rms,       r.rot_rms,         r.rot_rms_deg, r.trans_pearson,
          r.rot_pearson,     r.trans_exceed_frac, r.rot_exceed_frac, r.max_x,
          r.max_v,           r.max_a,           r.max_phi,     r.max_omega};
}

void report_from_values(const std::map<std::string, double>& kv, ComparisonReport& r) {
  auto need = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(std::string("report: missing field ") + key);
    return it->second;
  };
  r.trans_rms = need("trans_rms_ms2");
  r.rot_rms = need("rot_rms_rads");
  r.rot_rms_deg = need("rot_rms_degs");
  r.trans_pearson = need("trans_pearson");
  r.rot_pearson = need("rot_pearson");
  r.trans_exceed_frac = need("trans_exceed_frac");
  r.rot_exceed_frac = need("rot_exceed_frac");
  r.max_x = need("max_abs_x_m");
  r.max_v = need("max_abs_v_ms");
  r.max_a = need("max_abs_a_ms2");
  r.max_phi = need("max_abs_phi_rad");
  r.max_omega = need("max_abs_omega_rads");
}

}  // namespace

void write_report(const ComparisonReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  const auto values = report_values(report);
  char line[128];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(line, sizeof(line), "%s = %.12g\n", kReportKeys[i], values[i]);
    out << line;
  }
  if (!out) throw ConfigError("write failed: " + path);
}

void write_report_csv(const ComparisonReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  const auto values = report_values(report);
  for (std::size_t i = 0; i < values.size(); ++i)
    out << kReportKeys[i] << (i + 1 < values.size() ? ',' : '\n');
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", values[i]);
    out << buf << (i + 1 < values.size() ? ',' : '\n');
  }
  if (!out) throw ConfigError("write failed: " + path);
}

ComparisonReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report: " + path);
  std::map<std::string, double> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ConfigError("report: malformed line: " + line);
    try {
      kv[line.substr(0, eq)] = std::stod(line.substr(eq + 3));
    } catch (const std::exception&) {
      throw ConfigError("report: bad value in line: " + line);
    }
  }
  ComparisonReport r;
  report_from_values(kv, r);
  return r;
}

}  // namespace mca::metrics
