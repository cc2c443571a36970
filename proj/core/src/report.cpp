#include "levynet/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levynet/error.hpp"

namespace levynet::harness {

using nlohmann::json;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::skipped:
      return "skipped";
  }
  return "fail";
}

void TestRecord::settle() {
  if (verdict == Verdict::skipped) return;
  verdict = !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; })
                ? Verdict::pass
                : Verdict::fail;
}

bool VerificationReport::passed() const {
  return std::none_of(records.begin(), records.end(), [](const TestRecord& r) { return r.verdict == Verdict::fail; });
}

namespace {

json record_body(const TestRecord& r) {
  json j{{"id", r.id},         {"title", r.title},   {"anchor", r.anchor},   {"statistic", r.statistic},
         {"threshold", r.threshold}, {"seed", r.seed}, {"streams", r.streams}, {"n", r.n},
         {"verdict", verdict_name(r.verdict)}, {"detail", r.detail}};
  j["p_value"] = r.p_value ? json(*r.p_value) : json(nullptr);
  j["ci"] = r.ci ? json::array({r.ci->first, r.ci->second}) : json(nullptr);
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"statistic", c.statistic},
                      {"relation", c.relation},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  j["checks"] = std::move(checks);
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back(r.id + "_" + t.name + ".csv");
  j["csv"] = std::move(tables);
  return j;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

json VerificationReport::body() const {
  json results = json::array();
  for (const auto& r : records) results.push_back(record_body(r));
  return json{{"format", kReportFormat}, {"version", kToolkitVersion}, {"suite", suite},
              {"root_seed", root_seed},  {"config", config},           {"passed", passed()},
              {"results", std::move(results)}};
}

json VerificationReport::to_json(const std::string& timestamp) const {
  json j = body();
  json timing = json::object();
  double total = 0.0;
  for (const auto& r : records) {
    timing[r.id] = r.runtime_s;
    total += r.runtime_s;
  }
  j["timing"] = {{"generated_at", timestamp}, {"total_s", total}, {"runtime_s", std::move(timing)}};
  return j;
}

std::string VerificationReport::markdown() const {
  std::ostringstream md;
  md << "# Verification report: " << suite << "\n\n";
  md << "toolkit " << kToolkitVersion << ", root seed " << root_seed << ", overall "
     << (passed() ? "PASS" : "FAIL") << "\n\n";
  md << "| id | title | verdict | statistic | threshold | p | n | runtime (s) |\n";
  md << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : records) {
    md << "| " << r.id << " | " << r.title << " | " << verdict_name(r.verdict) << " | " << fmt(r.statistic) << " | "
       << fmt(r.threshold) << " | " << (r.p_value ? fmt(*r.p_value) : "-") << " | " << r.n << " | "
       << fmt(r.runtime_s) << " |\n";
  }
  md << "\n";
  for (const auto& r : records) {
    md << "## " << r.id << " " << r.title << "\n\n";
    md << "anchor `" << r.anchor << "`, verdict **" << verdict_name(r.verdict) << "**\n\n";
    if (!r.detail.empty()) md << r.detail << "\n\n";
    for (const auto& c : r.checks)
      md << "- " << (c.pass ? "ok  " : "FAIL") << " " << c.name << ": " << fmt(c.statistic) << " " << c.relation
         << " " << fmt(c.threshold) << "\n";
    if (!r.checks.empty()) md << "\n";
  }
  return md.str();
}

void write_report(const VerificationReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir + "'");

  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw ConfigError("cannot write '" + (fs::path(dir) / name).string() + "'");
    return out;
  };

  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));

  open("report.json") << report.to_json(stamp).dump(2) << '\n';
  open("results.json") << report.body().dump(2) << '\n';
  open("report.md") << report.markdown();
  for (const auto& r : report.records) {
    for (const auto& t : r.tables) {
      auto out = open(r.id + "_" + t.name + ".csv");
      for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
      out << '\n';
      char buf[64];
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.17g", row[i]);
          out << (i ? "," : "") << buf;
        }
        out << '\n';
      }
    }
  }
}

CsvTable ecdf_table(const std::string& name, std::vector<double> samples, const std::function<double(double)>& cdf,
                    std::size_t max_rows) {
  CsvTable t;
  t.name = name;
  t.columns = {"x", "ecdf"};
  if (cdf) t.columns.push_back("model_cdf");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  if (n == 0) return t;
  const std::size_t rows = std::min(n, std::max<std::size_t>(max_rows, 2));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t i = rows == 1 ? n - 1 : r * (n - 1) / (rows - 1);
    std::vector<double> row{samples[i], static_cast<double>(i + 1) / static_cast<double>(n)};
    if (cdf) row.push_back(cdf(samples[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace levynet::harness
