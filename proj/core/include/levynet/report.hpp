#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace levynet::harness {

inline constexpr const char* kToolkitVersion = "0.3.0";
inline constexpr const char* kReportFormat = "levynet-report/1";

enum class Verdict { pass, fail, skipped };
const char* verdict_name(Verdict v);

struct Check {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  // "<", "<=", ">", ">=", "in", "contains", "=="
  std::string relation;
  bool pass = false;
};

struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct TestRecord {
  std::string id;
  std::string title;
  std::string anchor;
  double statistic = 0.0;
  double threshold = 0.0;
  std::optional<double> p_value;
  std::optional<std::pair<double, double>> ci;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> streams;
  std::uint64_t n = 0;
  Verdict verdict = Verdict::fail;
  std::string detail;
  std::vector<Check> checks;
  std::vector<CsvTable> tables;
  double runtime_s = 0.0;

  // Verdict from the checks: pass iff all pass.
  void settle();
};

struct VerificationReport {
  std::string suite;
  std::uint64_t root_seed = 0;
  nlohmann::json config;
  std::vector<TestRecord> records;

  bool passed() const;
  // Everything except runtimes and the timestamp; a pure function of
  // (version, config, seed).
  nlohmann::json body() const;
  nlohmann::json to_json(const std::string& timestamp) const;
  std::string markdown() const;
};

// Writes report.json, results.json (body only), report.md and one CSV per
// table into dir. Throws ConfigError if the directory is not writable.
void write_report(const VerificationReport& report, const std::string& dir);

// Evenly spaced order statistics of samples next to the model CDF.
// An empty cdf leaves the model column out.
CsvTable ecdf_table(const std::string& name, std::vector<double> samples,
                    const std::function<double(double)>& cdf = {}, std::size_t max_rows = 2000);

}  // namespace levynet::harness
