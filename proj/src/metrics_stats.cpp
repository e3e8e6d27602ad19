#include "pseudotest/metrics_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "pseudotest/errors.hpp"

namespace pseudotest {
namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double sample_variance(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / (v.size() - 1);
}

double two_sided_t(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
}

double two_sided_normal(double z) { return std::clamp(std::erfc(std::fabs(z) / std::sqrt(2.0)), 0.0, 1.0); }

// sum over tie groups of t^3 - t
double tie_term(const std::vector<double>& values) {
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double t = static_cast<double>(j - i);
    acc += t * t * t - t;
    i = j;
  }
  return acc;
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void require_nonempty(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw ContractViolation("rank-sum test needs two non-empty samples");
}

}  // namespace

std::string_view to_string(StatMethod m) {
  switch (m) {
    case StatMethod::pearson: return "pearson";
    case StatMethod::rank_sum: return "rank_sum";
    case StatMethod::signed_rank: return "signed_rank";
    case StatMethod::cohen_d: return "cohen_d";
  }
  return "?";
}

ProjectMetrics metrics_from_counts(std::size_t n_methods, std::size_t n_covered, std::size_t n_mua,
                                   std::size_t n_pseudo) {
  if (!(n_pseudo <= n_mua && n_mua <= n_covered && n_covered <= n_methods))
    throw ContractViolation("metric counts must satisfy pseudo <= mua <= covered <= methods");
  ProjectMetrics m;
  m.n_methods = n_methods;
  m.n_covered = n_covered;
  m.n_mua = n_mua;
  m.n_pseudo = n_pseudo;
  m.c_rate = ratio(n_covered, n_methods);
  m.ps_rate = ratio(n_pseudo, n_mua);
  return m;
}

ProjectMetrics project_metrics(const AnalysisReport& report) {
  std::size_t covered = 0, mua = 0, pseudo = 0;
  std::size_t pk = 0, pt = 0, rk = 0, rt = 0;
  for (const auto& [id, m] : report.methods) {
    if (m.classification.label != ClassificationLabel::not_covered) ++covered;
    if (m.inclusion.included) ++mua;
    const bool is_pseudo = m.classification.label == ClassificationLabel::pseudo_tested;
    const bool is_req = m.classification.label == ClassificationLabel::required;
    if (is_pseudo) ++pseudo;
    for (const auto& mu : m.mutants) {
      if (mu.detection == Detection::compile_error) continue;
      const bool killed = is_detected(mu.detection);
      if (is_pseudo) {
        ++pt;
        pk += killed;
      } else if (is_req) {
        ++rt;
        rk += killed;
      }
    }
  }
  ProjectMetrics m = metrics_from_counts(report.methods.size(), covered, mua, pseudo);
  m.ms_pseudo = ratio(pk, pt);
  m.ms_req = ratio(rk, rt);
  return m;
}

std::string render_percent(std::optional<double> r, int decimals) {
  if (!r) return "n/a";
  const double scale = std::pow(10.0, decimals);
  const double v = std::round(*r * 100.0 * scale) / scale;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f%%", decimals, v);
  return buf;
}

StatResult pearson(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw ContractViolation("pearson needs at least 3 pairs");
  const double n = static_cast<double>(pairs.size());
  double mx = 0, my = 0;
  for (auto [x, y] : pairs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (auto [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw UndefinedStatistic("undefined correlation: a coordinate has zero variance");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  StatResult res;
  res.method_tag = StatMethod::pearson;
  res.statistic = r;
  const double df = n - 2.0;
  res.p_value = std::fabs(r) >= 1.0 ? 0.0 : two_sided_t(r * std::sqrt(df / (1.0 - r * r)), df);
  return res;
}

std::vector<double> mid_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && values[idx[j]] == values[idx[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = r;
    i = j;
  }
  return ranks;
}

StatResult rank_sum_exact(const std::vector<double>& a, const std::vector<double>& b) {
  require_nonempty(a, b);
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = mid_ranks(pooled);
  const std::size_t n1 = a.size(), n = pooled.size();

  std::vector<int> doubled(n);
  for (std::size_t i = 0; i < n; ++i) doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
  const int max_sum = std::accumulate(doubled.begin(), doubled.end(), 0);
  int observed = 0;
  for (std::size_t i = 0; i < n1; ++i) observed += doubled[i];

  // ways[k][s]: subsets of size k with doubled rank sum s
  std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (int r : doubled)
    for (std::size_t k = n1; k >= 1; --k)
      for (int s = max_sum; s >= r; --s) ways[k][s] += ways[k - 1][s - r];

  double total = 0, le = 0, ge = 0;
  for (int s = 0; s <= max_sum; ++s) {
    const double w = ways[n1][s];
    total += w;
    if (s <= observed) le += w;
    if (s >= observed) ge += w;
  }
  StatResult res;
  res.method_tag = StatMethod::rank_sum;
  res.statistic = observed / 2.0;
  res.p_value = std::min(1.0, 2.0 * std::min(le, ge) / total);
  res.exact = true;
  return res;
}

StatResult rank_sum_normal(const std::vector<double>& a, const std::vector<double>& b) {
  require_nonempty(a, b);
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = mid_ranks(pooled);
  const double n1 = a.size(), n2 = b.size(), n = n1 + n2;
  const double w = std::accumulate(ranks.begin(), ranks.begin() + a.size(), 0.0);
  const double mu = n1 * (n + 1.0) / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term(pooled) / (n * (n - 1.0)));

  StatResult res;
  res.method_tag = StatMethod::rank_sum;
  res.statistic = w;
  const double dev = std::fabs(w - mu);
  if (var <= 0.0 || dev <= 0.5) {
    res.p_value = 1.0;
  } else {
    res.p_value = two_sided_normal((dev - 0.5) / std::sqrt(var));
  }
  return res;
}

StatResult rank_sum_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() + b.size() <= kExactRankSumLimit) return rank_sum_exact(a, b);
  return rank_sum_normal(a, b);
}

StatResult signed_rank_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw ContractViolation("signed-rank test needs equal-length non-empty samples");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) diffs.push_back(a[i] - b[i]);

  StatResult res;
  res.method_tag = StatMethod::signed_rank;
  if (diffs.empty()) {
    res.p_value = 1.0;
    res.exact = true;
    return res;
  }
  std::vector<double> magnitudes;
  for (double d : diffs) magnitudes.push_back(std::fabs(d));
  const auto ranks = mid_ranks(magnitudes);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i)
    if (diffs[i] > 0) w_plus += ranks[i];
  res.statistic = w_plus;
  const double n = diffs.size();

  if (diffs.size() <= kExactRankSumLimit) {
    std::vector<int> doubled;
    for (double r : ranks) doubled.push_back(static_cast<int>(std::lround(2.0 * r)));
    const int max_sum = std::accumulate(doubled.begin(), doubled.end(), 0);
    std::vector<double> ways(max_sum + 1, 0.0);
    ways[0] = 1.0;
    for (int r : doubled)
      for (int s = max_sum; s >= r; --s) ways[s] += ways[s - r];
    const int observed = static_cast<int>(std::lround(2.0 * w_plus));
    double total = 0, le = 0, ge = 0;
    for (int s = 0; s <= max_sum; ++s) {
      total += ways[s];
      if (s <= observed) le += ways[s];
      if (s >= observed) ge += ways[s];
    }
    res.p_value = std::min(1.0, 2.0 * std::min(le, ge) / total);
    res.exact = true;
    return res;
  }

  const double mu = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term(magnitudes) / 48.0;
  const double dev = std::fabs(w_plus - mu);
  res.p_value = (var <= 0.0 || dev <= 0.5) ? 1.0 : two_sided_normal((dev - 0.5) / std::sqrt(var));
  return res;
}

StatResult effect_size(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw ContractViolation("effect size needs at least 2 values per sample");
  const double n1 = a.size(), n2 = b.size();
  const double pooled = std::sqrt(((n1 - 1) * sample_variance(a) + (n2 - 1) * sample_variance(b)) / (n1 + n2 - 2));
  if (!(pooled > 0.0)) throw UndefinedStatistic("undefined effect size: pooled standard deviation is zero");
  const double d = (mean(a) - mean(b)) / pooled;
  StatResult res;
  res.method_tag = StatMethod::cohen_d;
  res.statistic = d;
  res.effect_size = d;
  res.p_value = two_sided_t(d / std::sqrt(1.0 / n1 + 1.0 / n2), n1 + n2 - 2);
  return res;
}

ScoreGap score_gap(const std::vector<ProjectScores>& projects) {
  ScoreGap gap;
  double sum = 0;
  std::size_t counted = 0;
  ProjectScores pooled;
  for (const auto& p : projects) {
    pooled.pseudo_killed += p.pseudo_killed;
    pooled.pseudo_total += p.pseudo_total;
    pooled.req_killed += p.req_killed;
    pooled.req_total += p.req_total;
    if (p.pseudo_total == 0 || p.req_total == 0) continue;
    sum += static_cast<double>(p.req_killed) / p.req_total - static_cast<double>(p.pseudo_killed) / p.pseudo_total;
    ++counted;
  }
  if (counted > 0) gap.macro = sum / counted;
  if (pooled.pseudo_total > 0 && pooled.req_total > 0)
    gap.micro = static_cast<double>(pooled.req_killed) / pooled.req_total -
                static_cast<double>(pooled.pseudo_killed) / pooled.pseudo_total;
  return gap;
}

}  // namespace pseudotest
