// Runs every acceptance criterion at its default size and prints one line each.
#include <cstdio>
#include <exception>
#include <string>

#include "levynet/config.hpp"
#include "levynet/report.hpp"
#include "levynet/suites.hpp"

using namespace levynet::harness;

int main(int argc, char** argv) {
  RunConfig config;
  config.jobs = 0;
  std::string out = "acceptance_report";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) out = argv[++i];
    else if (a == "--seed" && i + 1 < argc) config.seed = std::stoull(argv[++i]);
    else {
      std::fprintf(stderr, "usage: %s [--out DIR] [--seed N]\n", argv[0]);
      return 2;
    }
  }

  VerificationReport report;
  report.suite = "acceptance";
  report.root_seed = config.seed;
  report.config = to_json(config);
  report.config.erase("jobs");
  report.config.erase("out_dir");

  int failed = 0;
  for (const auto& id : suite_tests("all")) {
    TestRecord r;
    try {
      r = run_test(id, config);
    } catch (const std::exception& e) {
      r.id = id;
      r.verdict = Verdict::fail;
      r.detail = std::string("error: ") + e.what();
    }
    const bool criterion = id[0] == 'C';
    if (criterion && r.verdict != Verdict::pass) ++failed;
    std::printf("%-4s %-4s %s (%.1fs)\n", r.id.c_str(),
                r.verdict == Verdict::pass ? "PASS" : r.verdict == Verdict::skipped ? "SKIP" : "FAIL", r.title.c_str(),
                r.runtime_s);
    if (r.verdict == Verdict::fail) {
      for (const auto& c : r.checks)
        if (!c.pass)
          std::printf("       failed check: %s (statistic %.6g %s %.6g)\n", c.name.c_str(), c.statistic,
                      c.relation.c_str(), c.threshold);
      if (!r.detail.empty()) std::printf("       %s\n", r.detail.c_str());
    }
    std::fflush(stdout);
    report.records.push_back(std::move(r));
  }
  try {
    write_report(report, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  std::printf("%d of 12 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
