#pragma once

// Random but internally consistent AnalysisReport values. Labels are derived
// here from the generated variant verdicts, not through the engine.

#include <random>
#include <string>

#include "pseudotest/analysis_report.hpp"
#include "pseudotest/metrics_stats.hpp"
#include "pseudotest/method_model.hpp"

namespace pseudotest::testing {

inline std::string synthetic_id(std::size_t i) {
  return "ns" + std::to_string(i % 3) + "::C" + std::to_string(i % 5) + "::m" + std::to_string(i) + "/" +
         std::to_string(i % 4);
}

inline Detection random_detection(std::mt19937& rng) {
  static constexpr Detection all[] = {Detection::undetected, Detection::undetected, Detection::detected_failure,
                                      Detection::detected_timeout, Detection::detected_crash,
                                      Detection::compile_error};
  return all[std::uniform_int_distribution<std::size_t>(0, std::size(all) - 1)(rng)];
}

inline AnalysisReport random_report(std::mt19937& rng, std::size_t max_methods = 30) {
  std::uniform_int_distribution<std::size_t> n_dist(0, max_methods);
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution mostly(0.8);
  static constexpr ExclusionReason filters[] = {ExclusionReason::getter_or_setter, ExclusionReason::constant_return,
                                                ExclusionReason::empty_unit,       ExclusionReason::deprecated,
                                                ExclusionReason::generated,        ExclusionReason::hash_protocol,
                                                ExclusionReason::user_filtered};

  AnalysisReport r;
  r.config.project_root = "/synthetic";
  r.source_digest = "0123456789abcdef";
  r.coverage.probe_log_digest = "fedcba9876543210";
  const std::size_t n = n_dist(rng);
  r.inventory_size = n;
  for (std::size_t i = 0; i < n; ++i) {
    MethodReport m;
    m.id = synthetic_id(i);
    m.file = "src/f" + std::to_string(i % 4) + ".cpp";
    m.return_category = kAllReturnCategories[i % std::size(kAllReturnCategories)];
    m.visibility = coin(rng) ? Visibility::public_api : Visibility::internal;
    const bool covered = mostly(rng);
    if (covered) {
      r.coverage.covered.insert(m.id);
      const int k = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int t = 0; t < k; ++t) r.coverage.covering_tests[m.id].insert("test " + std::to_string((i + t) % 6));
      m.covering_tests.assign(r.coverage.covering_tests[m.id].begin(), r.coverage.covering_tests[m.id].end());
    }
    if (!covered) {
      m.inclusion = InclusionDecision::exclude(ExclusionReason::not_covered);
      m.classification = {ClassificationLabel::not_covered, std::nullopt};
    } else if (std::bernoulli_distribution(0.25)(rng)) {
      const auto why = filters[std::uniform_int_distribution<std::size_t>(0, std::size(filters) - 1)(rng)];
      m.inclusion = InclusionDecision::exclude(why);
      m.classification = {ClassificationLabel::excluded, std::string(to_string(why))};
    } else {
      bool any_valid = false, any_detected = false;
      for (const auto& spec : transformations_for(m.return_category)) {
        VariantOutcome v;
        v.method_id = m.id;
        v.spec = spec;
        v.detection = random_detection(rng);
        if (is_detected(v.detection)) {
          v.failing_tests = {m.covering_tests.front()};
          v.failure_kind = v.detection == Detection::detected_failure ? FailureKind::assertion : FailureKind::none;
        }
        any_valid |= v.detection != Detection::compile_error;
        any_detected |= is_detected(v.detection);
        m.variants.push_back(std::move(v));
      }
      if (any_detected) m.classification = {ClassificationLabel::required, std::nullopt};
      else if (any_valid) m.classification = {ClassificationLabel::pseudo_tested, std::nullopt};
      else m.classification = {ClassificationLabel::unassessable, std::string("all variants failed to compile")};

      if (m.classification.label != ClassificationLabel::unassessable && coin(rng)) {
        const int k = std::uniform_int_distribution<int>(0, 4)(rng);
        std::size_t scored = 0, killed = 0;
        for (int j = 0; j < k; ++j) {
          MutantOutcome mo;
          mo.mutant.method_id = m.id;
          mo.mutant.mutation_operator = static_cast<MutationOperator>(j % 6);
          mo.mutant.site = {static_cast<std::size_t>(10 * j), static_cast<std::size_t>(10 * j + 2)};
          mo.mutant.replacement = "<=";
          mo.detection = random_detection(rng);
          if (mo.detection != Detection::compile_error) {
            ++scored;
            killed += is_detected(mo.detection);
          }
          m.mutants.push_back(mo);
        }
        if (scored) m.mutation_score = static_cast<double>(killed) / static_cast<double>(scored);
      }
    }
    r.methods.emplace(m.id, std::move(m));
  }
  r.metrics = project_metrics(r);
  r.timings = {Millis(10), Millis(20), Millis(30), Millis(0), Millis(70), Millis(4000)};
  return r;
}

}  // namespace pseudotest::testing
