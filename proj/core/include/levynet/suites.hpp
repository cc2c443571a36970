#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levynet/config.hpp"
#include "levynet/report.hpp"

namespace levynet::harness {

// csbp, characterization, drift, slices, coalescence, levynet, snake, all
const std::vector<std::string>& suite_names();
// Test ids run by a suite, in order.
std::vector<std::string> suite_tests(const std::string& name);

// Called after each test finishes.
using Progress = std::function<void(const TestRecord&)>;

// Runs the named suite. Throws ConfigError for an unknown suite.
VerificationReport run_suite(const std::string& name, const RunConfig& config, const Progress& progress = {});

// Runs a single test by id (C1..C12, S1..S3).
TestRecord run_test(const std::string& id, const RunConfig& config);

}  // namespace levynet::harness
