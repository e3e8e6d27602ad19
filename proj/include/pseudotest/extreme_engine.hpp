#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "pseudotest/analysis_report.hpp"
#include "pseudotest/project_adapter.hpp"

namespace pseudotest {

struct EngineConfig {
  ReportConfig report;  // echoed verbatim into the report
  int jobs = 1;
  Millis baseline_budget{std::chrono::minutes(5)};
  bool verify_build_cache = true;
  std::function<void(std::string_view)> progress;  // optional, called from the calling thread only
};

/// Per-variant test budget: slowest baseline test x factor + constant.
Millis timeout_budget(const Baseline& baseline, double factor, double constant_s);

/// Glob match of a method id against include/exclude lists (fnmatch syntax).
bool user_selected(const std::string& id, const std::vector<std::string>& include,
                   const std::vector<std::string>& exclude);

/// Compile-error outcomes must already be removed. Throws ContractViolation
/// when outcomes mix several methods.
Classification classify_method(const std::vector<VariantOutcome>& outcomes);

/// Runs the whole pipeline. Throws BaselineError when the pristine suite is
/// red or flaky.
AnalysisReport analyze(TargetAdapter& adapter, const fs::path& project_root, const EngineConfig& config);

/// Throws ContractViolation naming the first broken invariant: labels match
/// inclusion and coverage, pseudo-tested methods are covered, classifications
/// agree with variant outcomes, metrics match the per-method map.
void verify_report_invariants(const AnalysisReport& report);

/// Calls fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace pseudotest
