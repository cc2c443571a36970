#include "levynet/config.hpp"

#include <fstream>

#include "levynet/error.hpp"

namespace levynet::harness {

using nlohmann::json;

std::map<std::string, double> RunConfig::default_thresholds() {
  return {
      {"ks_p_min", 0.01},          {"se_factor", 3.0},         {"forest_se_factor", 5.0},
      {"root_tol", 1e-6},          {"agree_tol", 1e-6},        {"fold_tol", 1e-12},
      {"dispersion_lo", 0.9},      {"dispersion_hi", 1.1},     {"coalescence_mean_rel", 0.05},
      {"slope_target", -0.5},      {"slope_tol", 0.1},         {"drift_z", 3.0},
  };
}

double RunConfig::threshold(const std::string& name) const {
  auto it = thresholds.find(name);
  if (it == thresholds.end()) throw ConfigError("unknown threshold '" + name + "'");
  return it->second;
}

const std::map<std::string, double>& size_minima() {
  static const std::map<std::string, double> minima = {
      {"alpha_grid", 2},         {"fold_points", 1},         {"drift_paths", 2},
      {"csbp_paths", 20},        {"extinction_paths", 20},   {"ratio_pairs", 20},
      {"slice_samples", 20},     {"coalescence_runs", 20},   {"forest_count", 20},
      {"forest_size", 1000},     {"reversal_excursions", 1}, {"snake_count", 1},
      {"snake_points", 2},       {"snake_grid", 4},          {"lifetime_samples", 20},
      {"lifetime_cap", 100},
  };
  return minima;
}

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
  try {
    out = j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k.rfind("threshold.", 0) == 0) {
      const std::string name = k.substr(10);
      if (!c.thresholds.count(name)) throw ConfigError("unknown threshold key '" + k + "'");
      read(v, k.c_str(), c.thresholds[name]);
    } else if (k == "seed") read(v, "seed", c.seed);
    else if (k == "out_dir") read(v, "out_dir", c.out_dir);
    else if (k == "jobs") read(v, "jobs", c.jobs);
    else if (k == "alpha_grid") read(v, "alpha_grid", c.alpha_grid);
    else if (k == "fold_points") read(v, "fold_points", c.fold_points);
    else if (k == "drift_paths") read(v, "drift_paths", c.drift_paths);
    else if (k == "drift_r") read(v, "drift_r", c.drift_r);
    else if (k == "drift_eps") read(v, "drift_eps", c.drift_eps);
    else if (k == "drift_alphas") read(v, "drift_alphas", c.drift_alphas);
    else if (k == "csbp_paths") read(v, "csbp_paths", c.csbp_paths);
    else if (k == "csbp_step") read(v, "csbp_step", c.csbp_step);
    else if (k == "extinction_paths") read(v, "extinction_paths", c.extinction_paths);
    else if (k == "ratio_pairs") read(v, "ratio_pairs", c.ratio_pairs);
    else if (k == "slice_samples") read(v, "slice_samples", c.slice_samples);
    else if (k == "slice_points") read(v, "slice_points", c.slice_points);
    else if (k == "coalescence_runs") read(v, "coalescence_runs", c.coalescence_runs);
    else if (k == "coalescence_length") read(v, "coalescence_length", c.coalescence_length);
    else if (k == "forest_count") read(v, "forest_count", c.forest_count);
    else if (k == "forest_size") read(v, "forest_size", c.forest_size);
    else if (k == "reversal_excursions") read(v, "reversal_excursions", c.reversal_excursions);
    else if (k == "reversal_dt") read(v, "reversal_dt", c.reversal_dt);
    else if (k == "snake_count") read(v, "snake_count", c.snake_count);
    else if (k == "snake_points") read(v, "snake_points", c.snake_points);
    else if (k == "snake_grid") read(v, "snake_grid", c.snake_grid);
    else if (k == "lifetime_samples") read(v, "lifetime_samples", c.lifetime_samples);
    else if (k == "lifetime_cap") read(v, "lifetime_cap", c.lifetime_cap);
    else throw ConfigError("unknown config key '" + k + "'");
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j, std::move(base));
}

json to_json(const RunConfig& c) {
  json j{{"seed", c.seed},
         {"out_dir", c.out_dir},
         {"jobs", c.jobs},
         {"alpha_grid", c.alpha_grid},
         {"fold_points", c.fold_points},
         {"drift_paths", c.drift_paths},
         {"drift_r", c.drift_r},
         {"drift_eps", c.drift_eps},
         {"drift_alphas", c.drift_alphas},
         {"csbp_paths", c.csbp_paths},
         {"csbp_step", c.csbp_step},
         {"extinction_paths", c.extinction_paths},
         {"ratio_pairs", c.ratio_pairs},
         {"slice_samples", c.slice_samples},
         {"slice_points", c.slice_points},
         {"coalescence_runs", c.coalescence_runs},
         {"coalescence_length", c.coalescence_length},
         {"forest_count", c.forest_count},
         {"forest_size", c.forest_size},
         {"reversal_excursions", c.reversal_excursions},
         {"reversal_dt", c.reversal_dt},
         {"snake_count", c.snake_count},
         {"snake_points", c.snake_points},
         {"snake_grid", c.snake_grid},
         {"lifetime_samples", c.lifetime_samples},
         {"lifetime_cap", c.lifetime_cap}};
  for (const auto& [k, v] : c.thresholds) j["threshold." + k] = v;
  return j;
}

void validate(const RunConfig& c) {
  const json j = to_json(c);
  for (const auto& [key, minimum] : size_minima()) {
    if (j.at(key).get<double>() < minimum)
      throw ConfigError("config key '" + key + "' is below its minimum " + std::to_string(minimum));
  }
  if (!(c.drift_r > 0.0)) throw ConfigError("drift_r must be positive");
  if (!(c.drift_eps > 0.0 && c.drift_eps < 0.25)) throw ConfigError("drift_eps must lie in (0, 1/4)");
  if (c.drift_alphas.empty()) throw ConfigError("drift_alphas must not be empty");
  for (double a : c.drift_alphas)
    if (!(a > 1.0 && a < 2.0)) throw ConfigError("drift_alphas entries must lie in (1, 2)");
  if (!(c.csbp_step > 0.0)) throw ConfigError("csbp_step must be positive");
  if (!(c.slice_points > 0.0)) throw ConfigError("slice_points must be positive");
  if (!(c.coalescence_length > 0.0)) throw ConfigError("coalescence_length must be positive");
  if (!(c.reversal_dt > 0.0)) throw ConfigError("reversal_dt must be positive");
  if (c.snake_points > c.snake_grid + 1) throw ConfigError("snake_points exceeds the grid size");
}

}  // namespace levynet::harness
