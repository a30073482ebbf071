#include "mca/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mca/errors.hpp"

#include <nlohmann/json.hpp>

namespace mca::config {

using json = nlohmann::ordered_json;

namespace {

// reads obj[key] into out if present, marking the key as consumed
template <class T>
void get(const json& obj, std::set<std::string>& seen, const char* key, T& out) {
  seen.insert(key);
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void check_unknown(const json& obj, const std::set<std::string>& seen, const char* where) {
  for (const auto& item : obj.items())
    if (!seen.count(item.key()))
      throw ConfigError(std::string("config: unknown key '") + item.key() + "' in " + where);
}

json subobject(const json& obj, std::set<std::string>& seen, const char* key) {
  seen.insert(key);
  if (!obj.contains(key)) return json::object();
  if (!obj.at(key).is_object())
    throw ConfigError(std::string("config: '") + key + "' must be an object");
  return obj.at(key);
}

void parse_scales(const json& o, env::ObservationScales& s) {
  std::set<std::string> seen;
  get(o, seen, "x", s.x);
  get(o, seen, "v", s.v);
  get(o, seen, "a", s.a);
  get(o, seen, "f", s.f);
  get(o, seen, "phi", s.phi);
  get(o, seen, "omega", s.omega);
  get(o, seen, "f_v", s.f_v);
  get(o, seen, "omega_v", s.omega_v);
  check_unknown(o, seen, "episode.scales");
}

void parse_episode(const json& o, env::EpisodeConfig& e) {
  std::set<std::string> seen;
  get(o, seen, "dt", e.dt);
  get(o, seen, "steps_per_section", e.steps_per_section);
  get(o, seen, "sections_per_episode", e.sections_per_episode);
  parse_scales(subobject(o, seen, "scales"), e.scales);

  get(o, seen, "delta_a_max", e.limits.delta_a_max);
  get(o, seen, "delta_omega_max", e.limits.delta_omega_max);

  const json rw = subobject(o, seen, "reward");
  {
    std::set<std::string> rs;
    get(rw, rs, "w_f", e.weights.w_f);
    get(rw, rs, "w_omega", e.weights.w_omega);
    get(rw, rs, "w_x", e.weights.w_x);
    get(rw, rs, "w_da", e.weights.w_da);
    get(rw, rs, "w_domega", e.weights.w_domega);
    get(rw, rs, "r_limit", e.weights.r_limit);
    get(rw, rs, "x_max", e.weights.x_max);
    get(rw, rs, "phi_limit", e.weights.phi_limit);
    get(rw, rs, "omega_pt", e.weights.omega_pt);
    check_unknown(rw, rs, "episode.reward");
  }

  const json sb = subobject(o, seen, "sampling");
  {
    std::set<std::string> ss;
    get(sb, ss, "t_start_min", e.bounds.t_start_min);
    get(sb, ss, "t_start_max", e.bounds.t_start_max);
    get(sb, ss, "d_min", e.bounds.d_min);
    get(sb, ss, "d_max", e.bounds.d_max);
    get(sb, ss, "peak_min", e.bounds.peak_min);
    get(sb, ss, "peak_max", e.bounds.peak_max);
    check_unknown(sb, ss, "episode.sampling");
  }

  const json rm = subobject(o, seen, "roll");
  {
    std::set<std::string> rs;
    get(rm, rs, "k_roll", e.roll.k_roll);
    get(rm, rs, "tau_roll", e.roll.tau_roll);
    check_unknown(rm, rs, "episode.roll");
  }
  check_unknown(o, seen, "episode");
}

void parse_ppo(const json& o, ppo::PpoConfig& p) {
  std::set<std::string> seen;
  get(o, seen, "gamma", p.gamma);
  get(o, seen, "gae_lambda", p.gae_lambda);
  get(o, seen, "clip", p.clip);
  get(o, seen, "epochs", p.epochs);
  get(o, seen, "minibatch", p.minibatch);
  get(o, seen, "batch", p.batch);
  get(o, seen, "total_steps", p.total_steps);
  get(o, seen, "n_envs", p.n_envs);
  get(o, seen, "lr", p.lr);
  get(o, seen, "value_coef", p.value_coef);
  get(o, seen, "entropy_coef", p.entropy_coef);
  get(o, seen, "max_grad_norm", p.max_grad_norm);
  get(o, seen, "hidden", p.hidden);
  get(o, seen, "init_log_std", p.init_log_std);
  get(o, seen, "grad_shards", p.grad_shards);
  check_unknown(o, seen, "ppo");
}

void parse_washout(const json& o, washout::OptimizeSettings& w) {
  std::set<std::string> seen;
  get(o, seen, "w1", w.w1);
  get(o, seen, "w2", w.w2);
  get(o, seen, "x_max", w.x_max);
  get(o, seen, "starts", w.starts);
  get(o, seen, "nm_max_iters", w.local.max_iters);
  check_unknown(o, seen, "washout");
}

json scales_json(const env::ObservationScales& s) {
  return {{"x", s.x},     {"v", s.v},         {"a", s.a},
          {"f", s.f},     {"phi", s.phi},     {"omega", s.omega},
          {"f_v", s.f_v}, {"omega_v", s.omega_v}};
}

json episode_json(const env::EpisodeConfig& e) {
  return {{"dt", e.dt},
          {"steps_per_section", e.steps_per_section},
          {"sections_per_episode", e.sections_per_episode},
          {"scales", scales_json(e.scales)},
          {"delta_a_max", e.limits.delta_a_max},
          {"delta_omega_max", e.limits.delta_omega_max},
          {"reward",
           {{"w_f", e.weights.w_f},
            {"w_omega", e.weights.w_omega},
            {"w_x", e.weights.w_x},
            {"w_da", e.weights.w_da},
            {"w_domega", e.weights.w_domega},
            {"r_limit", e.weights.r_limit},
            {"x_max", e.weights.x_max},
            {"phi_limit", e.weights.phi_limit},
            {"omega_pt", e.weights.omega_pt}}},
          {"sampling",
           {{"t_start_min", e.bounds.t_start_min},
            {"t_start_max", e.bounds.t_start_max},
            {"d_min", e.bounds.d_min},
            {"d_max", e.bounds.d_max},
            {"peak_min", e.bounds.peak_min},
            {"peak_max", e.bounds.peak_max}}},
          {"roll", {{"k_roll", e.roll.k_roll}, {"tau_roll", e.roll.tau_roll}}}};
}

json ppo_json(const ppo::PpoConfig& p) {
  return {{"gamma", p.gamma},
          {"gae_lambda", p.gae_lambda},
          {"clip", p.clip},
          {"epochs", p.epochs},
          {"minibatch", p.minibatch},
          {"batch", p.batch},
          {"total_steps", p.total_steps},
          {"n_envs", p.n_envs},
          {"lr", p.lr},
          {"value_coef", p.value_coef},
          {"entropy_coef", p.entropy_coef},
          {"max_grad_norm", p.max_grad_norm},
          {"hidden", p.hidden},
          {"init_log_std", p.init_log_std},
          {"grad_shards", p.grad_shards}};
}

json washout_json(const washout::OptimizeSettings& w) {
  return {{"w1", w.w1},
          {"w2", w.w2},
          {"x_max", w.x_max},
          {"starts", w.starts},
          {"nm_max_iters", w.local.max_iters}};
}

}  // namespace

RunConfig defaults() { return RunConfig{}; }

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig c;
  std::set<std::string> seen;
  get(j, seen, "seed", c.seed);
  get(j, seen, "threads", c.threads);
  parse_episode(subobject(j, seen, "episode"), c.episode);
  parse_ppo(subobject(j, seen, "ppo"), c.ppo);
  parse_washout(subobject(j, seen, "washout"), c.washout);
  get(j, seen, "iso_speed", c.iso_speed);
  get(j, seen, "iso_offset", c.iso_offset);
  get(j, seen, "checkpoint_every", c.checkpoint_every);
  check_unknown(j, seen, "config");

  c.ppo.validate();
  finalize(c);
  return c;
}

void finalize(RunConfig& c) {
  c.washout.seed = c.seed;
  c.washout.serial = c.threads == 1;
  c.ppo.serial = c.threads == 1;
}

std::string to_json_string(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["episode"] = episode_json(c.episode);
  j["ppo"] = ppo_json(c.ppo);
  j["washout"] = washout_json(c.washout);
  j["iso_speed"] = c.iso_speed;
  j["iso_offset"] = c.iso_offset;
  j["checkpoint_every"] = c.checkpoint_every;
  return j.dump(2) + "\n";
}

void save(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << to_json_string(config);
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace mca::config
