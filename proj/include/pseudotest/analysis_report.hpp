#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pseudotest/coverage_probe.hpp"
#include "pseudotest/method_model.hpp"
#include "pseudotest/target_adapter.hpp"

namespace pseudotest {

enum class Detection { undetected, detected_failure, detected_timeout, detected_crash, compile_error };

std::string_view to_string(Detection);
Detection detection_from_string(std::string_view);
Detection detection_for(SuiteStatus status);
inline bool is_detected(Detection d) {
  return d == Detection::detected_failure || d == Detection::detected_timeout || d == Detection::detected_crash;
}

struct VariantOutcome {
  std::string method_id;
  TransformationSpec spec;
  Detection detection = Detection::undetected;
  std::vector<std::string> failing_tests;
  Millis duration{0};
  FailureKind failure_kind = FailureKind::none;
  bool flaky = false;

  friend bool operator==(const VariantOutcome&, const VariantOutcome&) = default;
};

enum class MutationOperator {
  negate_conditional,
  conditional_boundary,
  arithmetic_replacement,
  increment_flip,
  return_value_mutation,
  remove_call
};

std::string_view to_string(MutationOperator);
MutationOperator mutation_operator_from_string(std::string_view);

struct MutantSpec {
  std::string method_id;
  MutationOperator mutation_operator = MutationOperator::negate_conditional;
  SourceSpan site;
  std::string replacement;

  friend bool operator==(const MutantSpec&, const MutantSpec&) = default;
  friend auto operator<=>(const MutantSpec& a, const MutantSpec& b) {
    if (auto c = a.method_id <=> b.method_id; c != 0) return c;
    if (auto c = a.site.begin <=> b.site.begin; c != 0) return c;
    if (auto c = a.site.end <=> b.site.end; c != 0) return c;
    if (auto c = a.mutation_operator <=> b.mutation_operator; c != 0) return c;
    return a.replacement <=> b.replacement;
  }
};

/// A mutant's verdict; compile_error mutants are kept for reporting but never scored.
struct MutantOutcome {
  MutantSpec mutant;
  Detection detection = Detection::undetected;
  FailureKind failure_kind = FailureKind::none;

  friend bool operator==(const MutantOutcome&, const MutantOutcome&) = default;
};

struct MethodReport {
  std::string id;
  std::string file;
  ReturnCategory return_category = ReturnCategory::unit;
  Visibility visibility = Visibility::public_api;
  InclusionDecision inclusion;
  Classification classification;
  std::vector<std::string> covering_tests;
  std::vector<VariantOutcome> variants;  // transformations_for order; compile errors included
  std::vector<MutantOutcome> mutants;
  std::optional<double> mutation_score;

  friend bool operator==(const MethodReport&, const MethodReport&) = default;
};

struct ProjectMetrics {
  std::size_t n_methods = 0;
  std::size_t n_covered = 0;
  std::optional<double> c_rate;
  std::size_t n_mua = 0;
  std::size_t n_pseudo = 0;
  std::optional<double> ps_rate;
  std::optional<double> ms_pseudo;
  std::optional<double> ms_req;

  friend bool operator==(const ProjectMetrics&, const ProjectMetrics&) = default;
};

struct ReportConfig {
  std::string project_root;
  double timeout_factor = 2.0;
  double timeout_constant_s = 4.0;
  bool full_suite_mode = false;
  bool fast_mode = false;
  bool with_mutation_baseline = false;
  std::vector<std::string> include;
  std::vector<std::string> exclude;

  friend bool operator==(const ReportConfig&, const ReportConfig&) = default;
};

struct Timings {
  Millis baseline{0};
  Millis coverage{0};
  Millis variants{0};
  Millis mutants{0};
  Millis total{0};
  Millis test_budget{0};

  friend bool operator==(const Timings&, const Timings&) = default;
};

/// One variant rerun from a clean build to confirm the cached-build verdict.
struct CacheCheck {
  std::string method_id;
  std::string transformation;
  Detection cached = Detection::undetected;
  Detection rebuilt = Detection::undetected;
  bool agreed() const { return cached == rebuilt; }

  friend bool operator==(const CacheCheck&, const CacheCheck&) = default;
};

struct AnalysisReport {
  int schema_version = 1;
  ReportConfig config;
  std::size_t inventory_size = 0;
  std::string source_digest;
  CoverageMap coverage;
  std::map<std::string, MethodReport> methods;  // keyed and ordered by id
  ProjectMetrics metrics;
  Timings timings;
  std::optional<CacheCheck> cache_check;
  std::vector<std::string> warnings;

  std::vector<std::string> ids_with(ClassificationLabel label) const;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

}  // namespace pseudotest
