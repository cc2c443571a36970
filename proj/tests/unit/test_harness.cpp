#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "levynet/config.hpp"
#include "levynet/error.hpp"
#include "levynet/report.hpp"
#include "levynet/serialize.hpp"
#include "levynet/suites.hpp"

using namespace levynet;
using namespace levynet::harness;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.slice_samples = 500;
  c.slice_points = 64;
  c.coalescence_runs = 500;
  c.extinction_paths = 500;
  c.fold_points = 50;
  return c;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("levynet_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, RejectsUnknownKey) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"seed", 7}, {"colaescence_runs", 2000}}), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"threshold.no_such", 1.0}}), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"seed", "seven"}}), ConfigError);
}

TEST(Config, EnforcesMinima) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"csbp_paths", 5}}), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json{{"drift_eps", 0.3}}), ConfigError);
  EXPECT_NO_THROW(config_from_json(nlohmann::json{{"csbp_paths", 20}}));
}

TEST(Config, ThresholdOverrideAndRoundTrip) {
  const auto c = config_from_json(nlohmann::json{{"seed", 9}, {"threshold.ks_p_min", 0.05}, {"jobs", 2}});
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.jobs, 2u);
  EXPECT_EQ(c.threshold("ks_p_min"), 0.05);
  EXPECT_THROW(c.threshold("nope"), ConfigError);
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, LoadFileErrors) {
  EXPECT_THROW(load_config("/nonexistent/levynet.json"), ConfigError);
  const auto dir = scratch("badjson");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << "{not json";
  EXPECT_THROW(load_config((dir / "c.json").string()), ConfigError);
}

TEST(Suites, NamesAndMembership) {
  EXPECT_EQ(suite_tests("characterization"), (std::vector<std::string>{"C1", "C2"}));
  EXPECT_EQ(suite_tests("all").size(), 15u);
  EXPECT_THROW(suite_tests("nope"), ConfigError);
  EXPECT_THROW(run_suite("nope", RunConfig{}), ConfigError);
  EXPECT_THROW(run_test("C99", RunConfig{}), ConfigError);
}

TEST(Suites, BodyIsReproducible) {
  const auto c = small_config();
  const auto a = run_suite("characterization", c);
  const auto b = run_suite("characterization", c);
  EXPECT_EQ(a.body().dump(), b.body().dump());
}

TEST(Suites, BodyIndependentOfJobs) {
  auto c = small_config();
  c.jobs = 1;
  const auto a = run_suite("slices", c);
  c.jobs = 3;
  const auto b = run_suite("slices", c);
  EXPECT_EQ(a.body().dump(), b.body().dump());
}

TEST(Suites, InjectedThresholdFails) {
  auto c = small_config();
  c.thresholds["coalescence_mean_rel"] = 0.0;
  const auto r = run_suite("coalescence", c);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].verdict, Verdict::fail);
  EXPECT_FALSE(r.passed());
}

TEST(Suites, StreamsAreDisjoint) {
  const auto c = small_config();
  std::set<std::uint64_t> seen;
  for (const char* id : {"C1", "C2", "C4", "C6", "C7", "S1"}) {
    const auto rec = run_test(id, c);
    EXPECT_EQ(rec.seed, c.seed);
    for (auto s : rec.streams) EXPECT_TRUE(seen.insert(s).second) << id << " reuses stream " << s;
  }
  EXPECT_EQ(run_test("S1", c).verdict, Verdict::skipped);
}

TEST(Report, WritesFilesAndRejectsBadDirectory) {
  const auto r = run_suite("characterization", small_config());
  const auto dir = scratch("report");
  write_report(r, dir.string());
  for (const char* f : {"report.json", "results.json", "report.md"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  std::ifstream in(dir / "results.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.dump(), r.body().dump());
  EXPECT_THROW(write_report(r, "/proc/levynet/cannot"), ConfigError);
}

TEST(Report, EcdfTable) {
  const auto t = ecdf_table("x", {3.0, 1.0, 2.0, 4.0}, [](double x) { return x / 4.0; });
  ASSERT_EQ(t.rows.size(), 4u);
  ASSERT_EQ(t.columns.size(), 3u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_GE(t.rows[i][0], t.rows[i - 1][0]);
  EXPECT_EQ(t.rows.back()[0], 4.0);
  EXPECT_EQ(t.rows.back()[2], 1.0);
  std::vector<double> many(10000);
  for (std::size_t i = 0; i < many.size(); ++i) many[i] = double(i);
  EXPECT_LE(ecdf_table("y", many, {}, 100).rows.size(), 100u);
  EXPECT_EQ(ecdf_table("y", many).columns.size(), 2u);
}

TEST(Serialize, StablePathRoundTrip) {
  Rng rng(1);
  stable_levy::PathScheme scheme;
  scheme.grid_dt = 1e-2;
  const auto p = stable_levy::sample_path(1.5, 0.0, 1.0, scheme, rng);
  EXPECT_EQ(io::stable_path_from_json(nlohmann::json::parse(io::to_json(p).dump())), p);
}

TEST(Serialize, ForestRoundTrip) {
  Rng rng(2);
  const auto law = stable_forest::offspring_law(1.5);
  const auto t = stable_forest::sample_conditioned_tree(law, 500, rng);
  const auto back = io::forest_profile_from_json(nlohmann::json::parse(io::to_json(t).dump()));
  EXPECT_EQ(back.alpha, t.alpha);
  EXPECT_EQ(back.roots, t.roots);
  EXPECT_EQ(back.offspring_counts, t.offspring_counts);
  EXPECT_EQ(back.walk, t.walk);
  EXPECT_EQ(back.heights, t.heights);
  EXPECT_EQ(back.level_counts, t.level_counts);
  EXPECT_EQ(back.truncated_at, t.truncated_at);
}

TEST(Serialize, SnakeRoundTrip) {
  Rng rng(3);
  const auto s = brownian_map::sample_discrete_snake(64, rng);
  const auto back = io::snake_from_json(nlohmann::json::parse(io::to_json(s).dump()));
  EXPECT_EQ(back.n, s.n);
  EXPECT_EQ(back.y, s.y);
  EXPECT_EQ(back.x, s.x);
  EXPECT_EQ(back.root_index, s.root_index);
  EXPECT_EQ(back.variant, s.variant);
}
