#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pseudotest/target_adapter.hpp"

namespace pseudotest {

struct CoverageMap {
  std::set<std::string> covered;
  std::map<std::string, std::set<std::string>> covering_tests;
  std::string probe_log_digest;

  friend bool operator==(const CoverageMap&, const CoverageMap&) = default;
};

struct ProbedWorkspace {
  Workspace workspace;
  std::size_t probe_count = 0;
  fs::path log_path;
};

inline constexpr std::string_view kProbeHeader = "pseudotest_probe.hpp";
inline constexpr char kProbeSeparator = '\x1f';

/// Length-prefixed record exactly as the probe runtime writes it.
std::string encode_probe_record(std::string_view method_id, std::string_view test_id);

/// The statement inserted after a method's opening brace.
std::string probe_statement(const MethodDescriptor& method);

/// Inserts probes for `methods` (all from the same file) into `source`.
std::string instrument_source(std::string_view source, const std::vector<const MethodDescriptor*>& methods);

/// A fresh copy of the project with one entry probe per inventory method.
/// Throws StaleInventoryError if the sources changed since discovery and
/// InstrumentationError if a probed file no longer parses.
ProbedWorkspace instrument(const MethodInventory& inventory);

/// Throws ProbeLogError with the byte offset of a truncated or malformed record.
CoverageMap covered_methods(std::string_view probe_log);

/// Throws ContractViolation if the map mentions ids outside the inventory.
void check_coverage_against(const CoverageMap& coverage, const MethodInventory& inventory);

}  // namespace pseudotest
