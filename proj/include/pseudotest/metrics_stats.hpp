#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudotest/analysis_report.hpp"

namespace pseudotest {

enum class StatMethod { pearson, rank_sum, signed_rank, cohen_d };
std::string_view to_string(StatMethod);

struct StatResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<double> effect_size;
  StatMethod method_tag = StatMethod::pearson;
  bool exact = false;  // p computed by full enumeration
};

/// Counts from classifications, rates at full precision. Mutation scores
/// pool the scored (non compile-error) mutants of each group.
ProjectMetrics project_metrics(const AnalysisReport& report);

/// Same formulas from raw counts; for aggregated or external data.
ProjectMetrics metrics_from_counts(std::size_t n_methods, std::size_t n_covered, std::size_t n_mua,
                                   std::size_t n_pseudo);

/// "47%" for decimals = 0, "47.3%" for 1; "n/a" when absent.
std::string render_percent(std::optional<double> ratio, int decimals = 0);

/// Sample correlation with a two-sided p from Student's t. Needs three or more
/// pairs; throws UndefinedStatistic when either coordinate has no variance.
StatResult pearson(const std::vector<std::pair<double, double>>& pairs);

/// Wilcoxon rank-sum: statistic is the rank sum of `a` (mid-ranks for ties).
/// Exact enumeration for |a|+|b| <= 12, else tie- and continuity-corrected
/// normal approximation.
StatResult rank_sum_test(const std::vector<double>& a, const std::vector<double>& b);
StatResult rank_sum_exact(const std::vector<double>& a, const std::vector<double>& b);
StatResult rank_sum_normal(const std::vector<double>& a, const std::vector<double>& b);

inline constexpr std::size_t kExactRankSumLimit = 12;

/// Paired Wilcoxon signed-rank on a[i] - b[i]; statistic is W+.
StatResult signed_rank_test(const std::vector<double>& a, const std::vector<double>& b);

/// Cohen's d with pooled standard deviation. p_value is the pooled
/// two-sample t-test p. Throws UndefinedStatistic on zero pooled deviation.
StatResult effect_size(const std::vector<double>& a, const std::vector<double>& b);

/// Mid-ranks (1-based) of the values, ties averaged.
std::vector<double> mid_ranks(const std::vector<double>& values);

struct ProjectScores {
  std::size_t pseudo_killed = 0;
  std::size_t pseudo_total = 0;
  std::size_t req_killed = 0;
  std::size_t req_total = 0;
};

/// Mean difference MS_req - MS_pseudo: macro averages per-project gaps,
/// micro pools the mutants of every project first.
struct ScoreGap {
  std::optional<double> macro;
  std::optional<double> micro;
};

ScoreGap score_gap(const std::vector<ProjectScores>& projects);

}  // namespace pseudotest
