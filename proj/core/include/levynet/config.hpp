#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace levynet::harness {

// Flat key-value run configuration. Threshold overrides use keys of the
// form "threshold.<name>".
struct RunConfig {
  std::uint64_t seed = 42;
  std::string out_dir = "levynet-out";
  unsigned jobs = 1;

  // characterization
  std::size_t alpha_grid = 17;
  std::size_t fold_points = 1000;
  std::size_t drift_paths = 1'000'000;
  double drift_r = 1e-2;
  double drift_eps = 1e-3;
  std::vector<double> drift_alphas = {1.25, 1.5, 1.75};

  // csbp
  std::size_t csbp_paths = 100'000;
  double csbp_step = 1e-3;
  std::size_t extinction_paths = 100'000;
  std::size_t ratio_pairs = 40'000;

  // slices / coalescence
  std::size_t slice_samples = 10'000;
  double slice_points = 1024.0;
  std::size_t coalescence_runs = 10'000;
  double coalescence_length = 1e-3;

  // levynet
  std::size_t forest_count = 2000;
  std::size_t forest_size = 100'000;
  std::size_t reversal_excursions = 40'000;
  double reversal_dt = 1e-4;

  // snake
  std::size_t snake_count = 100;
  std::size_t snake_points = 512;
  std::size_t snake_grid = 4096;
  std::size_t lifetime_samples = 100'000;
  std::uint64_t lifetime_cap = 1'000'000;

  std::map<std::string, double> thresholds = default_thresholds();

  static std::map<std::string, double> default_thresholds();
  double threshold(const std::string& name) const;
};

// Smallest accepted value of every size key.
const std::map<std::string, double>& size_minima();

// Throws ConfigError on unknown keys, wrong types or sizes below the minima.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
nlohmann::json to_json(const RunConfig& config);
void validate(const RunConfig& config);

}  // namespace levynet::harness
