#include <doctest.h>

#include <random>

#include "common/stat_oracles.hpp"
#include "common/synthetic.hpp"
#include "common/published_counts.hpp"
#include "pseudotest/errors.hpp"
#include "pseudotest/metrics_stats.hpp"

using namespace pseudotest;
using namespace pseudotest::testing;

TEST_CASE("rates from counts") {
  const auto authz = metrics_from_counts(697, 325, 291, 13);
  CHECK(*authz.ps_rate == doctest::Approx(13.0 / 291.0));
  CHECK(render_percent(authz.ps_rate) == "4%");
  CHECK(render_percent(authz.c_rate) == "47%");
  const auto cli = metrics_from_counts(237, 181, 141, 2);
  CHECK(*cli.c_rate == doctest::Approx(0.764).epsilon(0.001));
  CHECK(render_percent(cli.c_rate) == "76%");
  CHECK_FALSE(metrics_from_counts(10, 5, 0, 0).ps_rate.has_value());
  CHECK_FALSE(metrics_from_counts(0, 0, 0, 0).c_rate.has_value());
  CHECK(render_percent(std::nullopt) == "n/a");
  CHECK(render_percent(0.4, 1) == "40.0%");
  CHECK(render_percent(9.0 / 17.0, 1) == "52.9%");
  CHECK_THROWS_AS(metrics_from_counts(10, 11, 0, 0), ContractViolation);
  CHECK_THROWS_AS(metrics_from_counts(10, 5, 6, 0), ContractViolation);
  CHECK_THROWS_AS(metrics_from_counts(10, 5, 4, 5), ContractViolation);
}

TEST_CASE("published rows render their own percentages") {
  for (const auto& row : kPublishedCounts) {
    const auto m = metrics_from_counts(row.methods, row.covered, row.mua, row.pseudo);
    CHECK_MESSAGE(render_percent(m.c_rate) == std::to_string(row.c_rate_percent) + "%", row.project);
    CHECK_MESSAGE(render_percent(m.ps_rate) == std::to_string(row.ps_rate_percent) + "%", row.project);
  }
}

TEST_CASE("project metrics equal an independent recount") {
  std::mt19937 rng(2024);
  for (int round = 0; round < 300; ++round) {
    const auto r = random_report(rng);
    std::size_t covered = 0, mua = 0, pseudo = 0, pk = 0, pt = 0, rk = 0, rt = 0;
    for (const auto& [id, m] : r.methods) {
      covered += r.coverage.covered.count(id);
      mua += m.inclusion.included;
      pseudo += m.classification.label == ClassificationLabel::pseudo_tested;
      for (const auto& mu : m.mutants) {
        if (mu.detection == Detection::compile_error) continue;
        if (m.classification.label == ClassificationLabel::pseudo_tested) {
          ++pt;
          pk += is_detected(mu.detection);
        }
        if (m.classification.label == ClassificationLabel::required) {
          ++rt;
          rk += is_detected(mu.detection);
        }
      }
    }
    const auto got = project_metrics(r);
    CHECK(got.n_methods == r.methods.size());
    CHECK(got.n_covered == covered);
    CHECK(got.n_mua == mua);
    CHECK(got.n_pseudo == pseudo);
    if (pt) CHECK(*got.ms_pseudo == doctest::Approx(static_cast<double>(pk) / pt));
    else CHECK_FALSE(got.ms_pseudo.has_value());
    if (rt) CHECK(*got.ms_req == doctest::Approx(static_cast<double>(rk) / rt));
    else CHECK_FALSE(got.ms_req.has_value());
  }
}

TEST_CASE("flipping a required method to pseudo-tested raises ps_rate") {
  std::mt19937 rng(99);
  int flips = 0;
  for (int round = 0; round < 300; ++round) {
    auto r = random_report(rng);
    const auto before = project_metrics(r);
    for (auto& [id, m] : r.methods) {
      if (m.classification.label != ClassificationLabel::required) continue;
      m.classification.label = ClassificationLabel::pseudo_tested;
      const auto after = project_metrics(r);
      CHECK(*after.ps_rate > *before.ps_rate);
      ++flips;
      break;
    }
  }
  CHECK(flips > 100);
}

TEST_CASE("pearson examples and errors") {
  CHECK(pearson({{1, 1}, {2, 2}, {3, 3}}).statistic == doctest::Approx(1.0));
  CHECK(pearson({{1, 3}, {2, 2}, {3, 1}}).statistic == doctest::Approx(-1.0));
  CHECK(pearson({{1, 1}, {2, 2}, {3, 3}}).p_value == 0.0);
  CHECK_THROWS_AS(pearson({{1, 1}, {2, 2}}), ContractViolation);
  CHECK_THROWS_AS(pearson({{1, 5}, {2, 5}, {3, 5}}), UndefinedStatistic);
  const auto r = pearson({{1, 2}, {2, 1}, {3, 4}, {4, 3}, {5, 2}, {6, 5}});
  CHECK(r.statistic == doctest::Approx(direct_pearson({{1, 2}, {2, 1}, {3, 4}, {4, 3}, {5, 2}, {6, 5}})));
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value < 1.0);
}

TEST_CASE("pearson p-value for a known t") {
  // x = 1..5, y = {1, 3, 2, 5, 4}: r = 0.8, t = 0.8 * sqrt(3 / 0.36) = 2.3094, df 3, p = 0.1040
  const auto r = pearson({{1, 1}, {2, 3}, {3, 2}, {4, 5}, {5, 4}});
  CHECK(r.statistic == doctest::Approx(0.8));
  CHECK(r.p_value == doctest::Approx(0.1040).epsilon(0.001));
}

TEST_CASE("pearson scale invariance") {
  std::mt19937 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const int n = std::uniform_int_distribution<int>(3, 30)(rng);
    std::vector<std::pair<double, double>> p, q;
    double a = coef(rng), c = coef(rng);
    if (std::fabs(a) < 0.1) a = 0.5;
    if (std::fabs(c) < 0.1) c = -0.5;
    const double b = coef(rng), d = coef(rng);
    for (int k = 0; k < n; ++k) {
      const double x = noise(rng), y = 0.3 * x + noise(rng);
      p.push_back({x, y});
      q.push_back({a * x + b, c * y + d});
    }
    const double sign = (a * c > 0) ? 1.0 : -1.0;
    CHECK(pearson(q).statistic == doctest::Approx(sign * pearson(p).statistic).epsilon(1e-9));
  }
}

TEST_CASE("mid-ranks of a hand-worked tied case") {
  // values 1.5 3 3 2 3 1: sorted 1 1.5 2 3 3 3 -> ranks 1 2 3 5 5 5
  const std::vector<double> v = {1.5, 3, 3, 2, 3, 1};
  CHECK(mid_ranks(v) == std::vector<double>{2, 5, 5, 3, 5, 1});
  // a = {1.5, 3, 3}, b = {2, 3, 1}: W = 2 + 5 + 5 = 12
  CHECK(rank_sum_test({1.5, 3, 3}, {2, 3, 1}).statistic == 12.0);
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto s = tied_sample(rng, 1 + i % 15);
    CHECK(mid_ranks(s) == counted_ranks(s));
  }
}

TEST_CASE("rank-sum examples") {
  const auto far = rank_sum_test({1, 2, 3}, {10, 11, 12});
  CHECK(far.exact);
  CHECK(far.statistic == 6.0);
  CHECK(far.p_value == doctest::Approx(2.0 / 20.0));
  CHECK(far.p_value == doctest::Approx(brute_force_rank_sum_p({1, 2, 3}, {10, 11, 12})));
  CHECK(rank_sum_test({4, 1, 7}, {7, 4, 1}).p_value >= 0.99);
  CHECK(rank_sum_test({4, 1, 7, 2, 2, 9, 3}, {7, 4, 1, 2, 2, 9, 3}).p_value >= 0.99);
  CHECK_THROWS_AS(rank_sum_test({}, {1.0}), ContractViolation);
}

TEST_CASE("exact rank-sum equals subset enumeration") {
  std::mt19937 rng(17);
  for (std::size_t total = 2; total <= kExactRankSumLimit; ++total) {
    for (std::size_t n1 = 1; n1 < total; ++n1) {
      for (int rep = 0; rep < 4; ++rep) {
        const auto a = tied_sample(rng, n1);
        const auto b = tied_sample(rng, total - n1);
        const auto got = rank_sum_test(a, b);
        CHECK(got.exact);
        CHECK(got.p_value == doctest::Approx(brute_force_rank_sum_p(a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("normal approximation tracks the exact test on balanced samples of twelve") {
  // Exhaustive over rank patterns without ties: every split of 1..12 into a
  // sample of size n1. Unbalanced splits (n1 < 4) are outside the bound.
  double worst = 0.0;
  for (std::size_t n1 = 4; n1 <= 8; ++n1) {
    for (unsigned mask = 0; mask < (1u << 12); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
      std::vector<double> a, b;
      for (int i = 0; i < 12; ++i) (mask & (1u << i) ? a : b).push_back(i + 1);
      worst = std::max(worst, std::fabs(rank_sum_exact(a, b).p_value - rank_sum_normal(a, b).p_value));
    }
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("heavy ties break the 0.02 agreement even on a balanced split") {
  // two tie groups of sizes 3 and 9: exact p = 24/132 (subset enumeration),
  // corrected normal approximation ~0.0705
  const std::vector<double> a = {0, 0, 0, 1, 1, 1}, b = {1, 1, 1, 1, 1, 1};
  CHECK(rank_sum_exact(a, b).p_value == doctest::Approx(brute_force_rank_sum_p(a, b)));
  CHECK(rank_sum_exact(a, b).p_value == doctest::Approx(24.0 / 132.0));
  CHECK(rank_sum_normal(a, b).p_value == doctest::Approx(0.0705).epsilon(0.01));
  CHECK(std::fabs(rank_sum_exact(a, b).p_value - rank_sum_normal(a, b).p_value) > 0.1);
}

TEST_CASE("large samples use the normal approximation") {
  std::vector<double> a, b;
  for (int i = 0; i < 10; ++i) {
    a.push_back(i);
    b.push_back(i + 20);
  }
  const auto r = rank_sum_test(a, b);
  CHECK_FALSE(r.exact);
  CHECK(r.p_value < 0.001);
}

TEST_CASE("signed-rank on paired data") {
  const auto r = signed_rank_test({0.9, 0.8, 0.7, 0.95, 0.85}, {0.1, 0.2, 0.3, 0.15, 0.25});
  CHECK(r.exact);
  CHECK(r.statistic == 15.0);
  CHECK(r.p_value == doctest::Approx(2.0 / 32.0));
  CHECK(signed_rank_test({1, 2, 3}, {1, 2, 3}).p_value == 1.0);
  CHECK_THROWS_AS(signed_rank_test({1, 2}, {1}), ContractViolation);
}

TEST_CASE("effect size constructions") {
  CHECK(effect_size({1, 2, 3}, {3, 2, 1}).statistic == doctest::Approx(0.0).epsilon(1e-9));
  for (double d : {0.0, 1.0, 1.5}) {
    for (std::size_t n : {4u, 7u, 12u}) {
      const auto [a, b] = shifted_by_pooled_sd(d, n);
      const auto r = effect_size(a, b);
      CHECK(std::fabs(r.statistic - d) <= 1e-9);
      CHECK(r.effect_size == r.statistic);
      CHECK(r.p_value >= 0.0);
      CHECK(r.p_value <= 1.0);
      // direct recomputation
      double ma = 0, mb = 0;
      for (std::size_t i = 0; i < n; ++i) {
        ma += a[i] / n;
        mb += b[i] / n;
      }
      double ssa = 0, ssb = 0;
      for (std::size_t i = 0; i < n; ++i) {
        ssa += (a[i] - ma) * (a[i] - ma);
        ssb += (b[i] - mb) * (b[i] - mb);
      }
      CHECK(std::fabs((ma - mb) / std::sqrt((ssa + ssb) / (2.0 * n - 2.0)) - d) <= 1e-9);
    }
  }
  CHECK_THROWS_AS(effect_size({1, 1}, {1, 1}), UndefinedStatistic);
  CHECK_THROWS_AS(effect_size({1}, {1, 2}), ContractViolation);
}

TEST_CASE("macro and micro score gaps") {
  const auto g = score_gap({{1, 10, 8, 10}, {0, 2, 90, 100}});
  // macro: ((0.8 - 0.1) + (0.9 - 0.0)) / 2; micro: 98/110 - 1/12
  CHECK(*g.macro == doctest::Approx(0.8));
  CHECK(*g.micro == doctest::Approx(98.0 / 110.0 - 1.0 / 12.0));
  CHECK_FALSE(score_gap({}).macro.has_value());
}
