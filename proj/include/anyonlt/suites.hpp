#pragma once

// Verification suites: the numbered acceptance checks and the per-module
// suites run by the command-line tool. Suites return file contents; only the
// caller writes to disk.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "anyonlt/report.hpp"

namespace anyonlt::suites {

struct SuiteOutput {
  report::Report report;
  std::map<std::string, std::string> files;  // relative name -> contents
};

struct Criterion {
  int id = 0;
  std::string name;
  double runtime_limit_seconds = 0.0;
  std::function<report::Check(const report::RunConfig&, SuiteOutput&)> run;
};

/// The thirteen acceptance checks with their desk-scale parameters.
const std::vector<Criterion>& acceptance_criteria();

/// Runs one criterion, timing it and turning exceptions into a failed check.
report::Check run_criterion(const Criterion& criterion, const report::RunConfig& config, SuiteOutput& output);

/// Dispatches on config.suite.
SuiteOutput run_suite(const report::RunConfig& config);

}  // namespace anyonlt::suites
