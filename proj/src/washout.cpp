#include "mca/washout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "mca/errors.hpp"

#include <nlohmann/json.hpp>

namespace mca::washout {

using json = nlohmann::json;

kinematics::PlatformTrajectory cw_run(const WashoutParams& params,
                                      const trajectory::ReferenceTrajectory& ref,
                                      double tilt_rate_limit) {
  const double dt = ref.dt;
  const double w = params.omega_hp;

  // HP2(s) = s^2 / (s^2 + 2 zeta w s + w^2), WO(s) = s / (s + w_wo)
  linear_filter::StateSpaceFilter hp2 =
      linear_filter::bilinear({{0.0, 0.0, 1.0}, {w * w, 2.0 * params.zeta_hp * w, 1.0}}, dt);
  linear_filter::StateSpaceFilter washout_1st =
      linear_filter::bilinear({{0.0, 1.0}, {params.omega_wo, 1.0}}, dt);
  linear_filter::StateSpaceFilter tilt_lp =
      linear_filter::bilinear({{params.omega_lp}, {params.omega_lp, 1.0}}, dt);

  kinematics::PlatformTrajectory out;
  out.dt = dt;
  const std::size_t n = ref.size();
  out.x.resize(n);
  out.v.resize(n);
  out.a.resize(n);
  out.phi.resize(n);
  out.omega.resize(n);
  out.f.resize(n);

  const double max_step = tilt_rate_limit * dt;
  double v = 0.0, x = 0.0, phi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = ref.f_v[i];
    // under f = g - a the platform accelerates opposite to the commanded
    // specific force, so its sensed transient tracks the reference
    const double a = -washout_1st.step(hp2.step(params.k_t * u));
    v += a * dt;
    x += v * dt;

    const double lp = tilt_lp.step(u);
    const double target =
        std::asin(std::clamp(params.k_tilt * lp / kinematics::kGravity, -1.0, 1.0));
    const double delta = std::clamp(target - phi, -max_step, max_step);
    const double phi_next = phi + delta;
    out.omega[i] = i == 0 ? 0.0 : delta / dt;
    phi = phi_next;

    out.a[i] = a;
    out.v[i] = v;
    out.x[i] = x;
    out.phi[i] = phi;
    out.f[i] = kinematics::specific_force(a, phi);
  }
  return out;
}

optim::Bounds default_bounds() {
  // k_t, omega_hp, zeta_hp, omega_wo, omega_lp, k_tilt
  return {{0.05, 0.2, 0.3, 0.05, 0.2, 0.0}, {1.0, 8.0, 2.0, 4.0, 8.0, 1.0}};
}

WashoutParams params_from_vector(std::span<const double> p) {
  return {p[0], p[1], p[2], p[3], p[4], p[5]};
}

std::array<double, 6> params_to_vector(const WashoutParams& p) {
  return {p.k_t, p.omega_hp, p.zeta_hp, p.omega_wo, p.omega_lp, p.k_tilt};
}

double cw_cost(const WashoutParams& params, const trajectory::ReferenceTrajectory& ref,
               std::span<const double> sensed_f_ref, std::span<const double> sensed_w_ref,
               const OptimizeSettings& settings) {
  const kinematics::PlatformTrajectory traj = cw_run(params, ref);
  if (traj.max_abs_x() >= settings.x_max) return std::numeric_limits<double>::infinity();

  auto oto = vestibular::make_otolith(ref.dt, settings.vestibular);
  auto scc = vestibular::make_semicircular(ref.dt, settings.vestibular);
  const std::size_t n = ref.size();
  double ef = 0.0, ew = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double df = oto.step(traj.f[i]) - sensed_f_ref[i];
    const double dw = scc.step(traj.omega[i]) - sensed_w_ref[i];
    ef += df * df;
    ew += dw * dw;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return settings.w1 * ef * inv_n + settings.w2 * ew * inv_n;
}

OptimizeResult cw_optimize(const trajectory::ReferenceTrajectory& ref, const optim::Bounds& bounds,
                           const OptimizeSettings& settings) {
  const std::vector<double> sensed_f_ref =
      vestibular::sense_translation(ref.f_v, ref.dt, settings.vestibular);
  const std::vector<double> sensed_w_ref =
      vestibular::sense_rotation(ref.omega_v, ref.dt, settings.vestibular);

  const optim::CostFn cost = [&](std::span<const double> p) {
    return cw_cost(params_from_vector(p), ref, sensed_f_ref, sensed_w_ref, settings);
  };

  optim::MultistartSettings ms;
  ms.starts = settings.starts;
  ms.seed = settings.seed;
  ms.serial = settings.serial;
  ms.local = settings.local;
  const optim::MultistartResult best = multistart_minimize(cost, bounds, ms);

  OptimizeResult result;
  result.params = params_from_vector(best.point);
  result.cost = best.cost;
  result.feasible = best.feasible;
  result.evaluations = best.evaluations;
  result.max_abs_x = cw_run(result.params, ref).max_abs_x();
  return result;
}

void write_result_json(const OptimizeResult& result, const OptimizeSettings& settings,
                       const std::string& path) {
  json j;
  j["params"] = {{"k_t", result.params.k_t},       {"omega_hp", result.params.omega_hp},
                 {"zeta_hp", result.params.zeta_hp}, {"omega_wo", result.params.omega_wo},
                 {"omega_lp", result.params.omega_lp}, {"k_tilt", result.params.k_tilt}};
  j["cost"] = result.cost;
  j["max_abs_x"] = result.max_abs_x;
  j["constraint_margin"] = settings.x_max - result.max_abs_x;
  j["feasible"] = result.feasible;
  j["evaluations"] = result.evaluations;
  j["weights"] = {{"w1", settings.w1}, {"w2", settings.w2}};
  j["x_max"] = settings.x_max;
  j["seed"] = settings.seed;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

OptimizeResult read_result_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open washout result: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("washout result: " + std::string(e.what()));
  }
  OptimizeResult r;
  try {
    const auto& p = j.at("params");
    r.params = {p.at("k_t"), p.at("omega_hp"), p.at("zeta_hp"),
                p.at("omega_wo"), p.at("omega_lp"), p.at("k_tilt")};
    r.cost = j.at("cost");
    r.max_abs_x = j.at("max_abs_x");
    r.feasible = j.at("feasible");
  } catch (const json::exception& e) {
    throw ConfigError("washout result: missing field: " + std::string(e.what()));
  }
  return r;
}

}  // namespace mca::washout
