#include "levynet/serialize.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "levynet/error.hpp"

namespace levynet::io {

namespace {

const char* exit_name(stable_levy::ExitSide s) {
  switch (s) {
    case stable_levy::ExitSide::lower:
      return "lower";
    case stable_levy::ExitSide::upper:
      return "upper";
    default:
      return "none";
  }
}

stable_levy::ExitSide exit_from(const std::string& s) {
  if (s == "lower") return stable_levy::ExitSide::lower;
  if (s == "upper") return stable_levy::ExitSide::upper;
  if (s == "none") return stable_levy::ExitSide::none;
  throw StructureError("unknown exit side '" + s + "'");
}

json matrix_json(const brownian_map::SquareMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.m; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.m; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const stable_levy::StablePath& path) {
  json j;
  j["alpha"] = path.alpha;
  j["levy_scale"] = path.levy_scale;
  if (std::isfinite(path.truncation))
    j["truncation"] = path.truncation;
  else
    j["truncation"] = nullptr;
  j["times"] = path.times;
  j["values"] = path.values;
  json jumps = json::array();
  for (const auto& jp : path.jumps) jumps.push_back({jp.time, jp.size});
  j["jumps"] = std::move(jumps);
  j["exit"] = exit_name(path.exit);
  return j;
}

stable_levy::StablePath stable_path_from_json(const json& j) {
  try {
    stable_levy::StablePath p;
    p.alpha = j.at("alpha").get<double>();
    p.levy_scale = j.at("levy_scale").get<double>();
    p.truncation = j.at("truncation").is_null() ? std::numeric_limits<double>::infinity()
                                                : j.at("truncation").get<double>();
    p.times = j.at("times").get<std::vector<double>>();
    p.values = j.at("values").get<std::vector<double>>();
    for (const auto& jp : j.at("jumps")) p.jumps.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
    p.exit = exit_from(j.at("exit").get<std::string>());
    return p;
  } catch (const json::exception& e) {
    throw StructureError(std::string("stable path JSON: ") + e.what());
  }
}

json to_json(const csbp::CsbpPath& path) {
  json j;
  j["alpha"] = path.alpha;
  j["times"] = path.times;
  j["values"] = path.values;
  if (path.absorption_time)
    j["absorption_time"] = *path.absorption_time;
  else
    j["absorption_time"] = nullptr;
  return j;
}

json to_json(const stable_forest::ForestProfile& profile) {
  json j;
  j["alpha"] = profile.alpha;
  j["roots"] = profile.roots;
  j["offspring_counts"] = profile.offspring_counts;
  j["walk"] = profile.walk;
  j["heights"] = profile.heights;
  j["level_counts"] = profile.level_counts;
  if (profile.truncated_at)
    j["truncated_at"] = *profile.truncated_at;
  else
    j["truncated_at"] = nullptr;
  return j;
}

stable_forest::ForestProfile forest_profile_from_json(const json& j) {
  try {
    stable_forest::ForestProfile p;
    p.alpha = j.at("alpha").get<double>();
    p.roots = j.at("roots").get<std::size_t>();
    p.offspring_counts = j.at("offspring_counts").get<std::vector<std::int64_t>>();
    p.walk = j.at("walk").get<std::vector<std::int64_t>>();
    p.heights = j.at("heights").get<std::vector<std::int64_t>>();
    p.level_counts = j.at("level_counts").get<std::vector<std::int64_t>>();
    if (!j.at("truncated_at").is_null()) p.truncated_at = j.at("truncated_at").get<std::size_t>();
    return p;
  } catch (const json::exception& e) {
    throw StructureError(std::string("forest profile JSON: ") + e.what());
  }
}

void write_skeleton_jsonl(std::ostream& out, const levy_net::LevyNetSkeleton& skeleton) {
  out << json{{"type", "skeleton"},
              {"alpha", skeleton.alpha},
              {"total_depth", skeleton.total_depth},
              {"z_points", skeleton.z_times.size()},
              {"jumps", skeleton.jumps.size()}}
             .dump()
      << '\n';
  for (std::size_t i = 0; i < skeleton.z_times.size(); ++i)
    out << json{{"type", "z"}, {"t", skeleton.z_times[i]}, {"z", skeleton.z_values[i]}}.dump() << '\n';
  for (const auto& jp : skeleton.jumps)
    out << json{{"type", "jump"}, {"t", jp.time}, {"size", jp.size}, {"attachment", jp.attachment}}.dump() << '\n';
}

json to_json(const brownian_map::SnakeSample& sample) {
  json j;
  j["n"] = sample.n;
  j["variant"] = sample.variant == brownian_map::Variant::lattice ? "lattice" : "gaussian";
  j["root_index"] = sample.root_index;
  j["y"] = sample.y;
  j["x"] = sample.x;
  return j;
}

brownian_map::SnakeSample snake_from_json(const json& j) {
  try {
    brownian_map::SnakeSample s;
    s.n = j.at("n").get<std::size_t>();
    const auto v = j.at("variant").get<std::string>();
    if (v == "lattice")
      s.variant = brownian_map::Variant::lattice;
    else if (v == "gaussian")
      s.variant = brownian_map::Variant::gaussian;
    else
      throw StructureError("snake JSON: unknown variant '" + v + "'");
    s.root_index = j.at("root_index").get<std::size_t>();
    s.y = j.at("y").get<std::vector<double>>();
    s.x = j.at("x").get<std::vector<double>>();
    if (s.y.size() != s.n + 1 || s.x.size() != s.n + 1) throw StructureError("snake JSON: length mismatch");
    return s;
  } catch (const json::exception& e) {
    throw StructureError(std::string("snake JSON: ") + e.what());
  }
}

json to_json(const brownian_map::MetricMatrix& metric) {
  json j;
  j["point_times"] = metric.point_times;
  j["d_circ"] = matrix_json(metric.d_circ);
  j["d"] = matrix_json(metric.d);
  return j;
}

json to_json(const characterization::DriftEstimate& e) {
  return json{{"alpha", e.alpha},         {"r", e.r},         {"eps", e.eps},
              {"n", e.n},                 {"mean", e.mean},   {"halfwidth", e.halfwidth},
              {"std_error", e.std_error}, {"reference", e.reference}};
}

}  // namespace levynet::io
