#pragma once

#include <iosfwd>

#include <json.hpp>

#include "levynet/brownian_map.hpp"
#include "levynet/characterization.hpp"
#include "levynet/csbp.hpp"
#include "levynet/levy_net.hpp"
#include "levynet/stable_forest.hpp"
#include "levynet/stable_levy.hpp"

namespace levynet::io {

using json = nlohmann::json;

// Infinite truncation is written as null.
json to_json(const stable_levy::StablePath& path);
stable_levy::StablePath stable_path_from_json(const json& j);

json to_json(const csbp::CsbpPath& path);

json to_json(const stable_forest::ForestProfile& profile);
stable_forest::ForestProfile forest_profile_from_json(const json& j);

// One header line, then one line per Z sample and one per jump.
void write_skeleton_jsonl(std::ostream& out, const levy_net::LevyNetSkeleton& skeleton);

json to_json(const brownian_map::SnakeSample& sample);
brownian_map::SnakeSample snake_from_json(const json& j);

json to_json(const brownian_map::MetricMatrix& metric);
json to_json(const characterization::DriftEstimate& estimate);

}  // namespace levynet::io
