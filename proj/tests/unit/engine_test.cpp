#include <doctest.h>

#include <random>

#include "common/fake_adapter.hpp"
#include "common/synthetic.hpp"
#include "pseudotest/errors.hpp"
#include "pseudotest/extreme_engine.hpp"
#include "pseudotest/report.hpp"

using namespace pseudotest;
using namespace pseudotest::testing;

namespace {

VariantOutcome outcome(const std::string& id, Detection d) {
  VariantOutcome v;
  v.method_id = id;
  v.detection = d;
  return v;
}

std::vector<FakeMethod> sample_methods() {
  StructuralFlags getter;
  getter.is_getter = true;
  return {
      {"A::bump/0", ReturnCategory::unit, {}, {"t1"}},
      {"A::flag/0", ReturnCategory::boolean, {}, {"t1", "t2"}},
      {"A::count/0", ReturnCategory::integral, {}, {"t2"}},
      {"A::get/0", ReturnCategory::integral, getter, {"t1"}},
      {"A::unused/0", ReturnCategory::textual, {}, {}},
      {"B::name/0", ReturnCategory::textual, {}, {"t3"}},
  };
}

void script_sample(FakeAdapter& fake) {
  fake.script("A::flag/0", "false_val", {FakeAdapter::failing({"t2"})});
  fake.script("A::count/0", "int_zero", {FakeAdapter::with_status(SuiteStatus::timeout)});
  fake.script("A::count/0", "int_one", {FakeAdapter::with_status(SuiteStatus::compile_error)});
  fake.script("B::name/0", "string_empty", {FakeAdapter::with_status(SuiteStatus::compile_error)});
  fake.script("B::name/0", "string_A", {FakeAdapter::with_status(SuiteStatus::compile_error)});
}

EngineConfig quiet_config() {
  EngineConfig c;
  c.report.project_root = "/fake";
  return c;
}

}  // namespace

TEST_CASE("classification from variant outcomes") {
  CHECK(classify_method({outcome("m", Detection::undetected), outcome("m", Detection::undetected)}).label ==
        ClassificationLabel::pseudo_tested);
  CHECK(classify_method({outcome("m", Detection::undetected), outcome("m", Detection::detected_failure)}).label ==
        ClassificationLabel::required);
  CHECK(classify_method({outcome("m", Detection::detected_timeout)}).label == ClassificationLabel::required);
  CHECK(classify_method({outcome("m", Detection::detected_crash)}).label == ClassificationLabel::required);
  CHECK(classify_method({}).label == ClassificationLabel::unassessable);
  CHECK_THROWS_AS(classify_method({outcome("m", Detection::undetected), outcome("n", Detection::undetected)}),
                  ContractViolation);
  CHECK_THROWS_AS(classify_method({outcome("m", Detection::compile_error)}), ContractViolation);
}

TEST_CASE("budget is slowest test times factor plus constant") {
  Baseline b;
  b.per_test_times = {{"a", Micros(1200)}, {"b", Micros(250000)}};
  CHECK(timeout_budget(b, 2.0, 4.0) == Millis(4500));
  CHECK(timeout_budget(b, 3.0, 0.0) == Millis(750));
  b.per_test_times = {{"a", Micros(1)}};
  CHECK(timeout_budget(b, 1.0, 0.0) == Millis(1));
  CHECK(timeout_budget(Baseline{}, 2.0, 4.0) == Millis(4000));
}

TEST_CASE("user globs") {
  CHECK(user_selected("A::f/0", {}, {}));
  CHECK(user_selected("A::f/0", {"A::*"}, {}));
  CHECK_FALSE(user_selected("B::f/0", {"A::*"}, {}));
  CHECK_FALSE(user_selected("A::f/0", {"A::*"}, {"*::f/*"}));
}

TEST_CASE("pipeline over a scripted adapter") {
  FakeAdapter fake(sample_methods());
  script_sample(fake);
  const auto r = analyze(fake, "/fake", quiet_config());

  CHECK(r.methods.at("A::bump/0").classification.label == ClassificationLabel::pseudo_tested);
  CHECK(r.methods.at("A::flag/0").classification.label == ClassificationLabel::required);
  CHECK(r.methods.at("A::count/0").classification.label == ClassificationLabel::required);
  CHECK(r.methods.at("A::get/0").classification.label == ClassificationLabel::excluded);
  CHECK(r.methods.at("A::get/0").inclusion.exclusion_reason == ExclusionReason::getter_or_setter);
  CHECK(r.methods.at("A::unused/0").classification.label == ClassificationLabel::not_covered);
  CHECK(r.methods.at("B::name/0").classification.label == ClassificationLabel::unassessable);

  const auto& count = r.methods.at("A::count/0").variants;
  REQUIRE(count.size() == 2);
  CHECK(count[0].detection == Detection::detected_timeout);
  CHECK(count[1].detection == Detection::compile_error);

  CHECK(r.metrics.n_methods == 6);
  CHECK(r.metrics.n_covered == 5);
  CHECK(r.metrics.n_mua == 4);
  CHECK(r.metrics.n_pseudo == 1);
  CHECK(r.ids_with(ClassificationLabel::pseudo_tested) == std::vector<std::string>{"A::bump/0"});
  CHECK(r.timings.test_budget == Millis(4003));
  REQUIRE(r.cache_check);
  CHECK(r.cache_check->agreed());
  CHECK(fake.full_rebuilds() == 1);
  CHECK_NOTHROW(verify_report_invariants(r));
}

TEST_CASE("variants run only the covering tests unless full-suite mode") {
  {
    FakeAdapter fake(sample_methods());
    analyze(fake, "/fake", quiet_config());
    for (const auto& sel : fake.selections()) {
      REQUIRE(sel.has_value());
      CHECK_FALSE(sel->empty());
    }
  }
  {
    FakeAdapter fake(sample_methods());
    auto cfg = quiet_config();
    cfg.report.full_suite_mode = true;
    analyze(fake, "/fake", cfg);
    for (const auto& sel : fake.selections()) CHECK_FALSE(sel.has_value());
  }
}

TEST_CASE("fast mode stops at the first detection") {
  FakeAdapter fake(sample_methods());
  fake.script("A::flag/0", "true_val", {FakeAdapter::failing({"t1"})});
  auto cfg = quiet_config();
  cfg.report.fast_mode = true;
  const auto r = analyze(fake, "/fake", cfg);
  CHECK(r.methods.at("A::flag/0").variants.size() == 1);
  CHECK(fake.runs_of("A::flag/0", "false_val") == 0);
  CHECK(r.methods.at("A::flag/0").classification.label == ClassificationLabel::required);
}

TEST_CASE("failures outside the covering tests are retried once") {
  SUBCASE("retry passes: counted undetected") {
    FakeAdapter fake(sample_methods());
    fake.script("A::bump/0", "strip_body", {FakeAdapter::failing({"t9"}), SuiteOutcome{}});
    auto cfg = quiet_config();
    cfg.verify_build_cache = false;
    const auto r = analyze(fake, "/fake", cfg);
    const auto& v = r.methods.at("A::bump/0").variants.front();
    CHECK(v.detection == Detection::undetected);
    CHECK(v.flaky);
    CHECK(fake.runs_of("A::bump/0", "strip_body") == 2);
    CHECK(r.methods.at("A::bump/0").classification.label == ClassificationLabel::pseudo_tested);
    CHECK(r.warnings.size() == 1);
  }
  SUBCASE("retry fails again: stays detected") {
    FakeAdapter fake(sample_methods());
    fake.script("A::bump/0", "strip_body", {FakeAdapter::failing({"t9"})});
    auto cfg = quiet_config();
    cfg.verify_build_cache = false;
    const auto r = analyze(fake, "/fake", cfg);
    CHECK(r.methods.at("A::bump/0").variants.front().detection == Detection::detected_failure);
    CHECK(r.methods.at("A::bump/0").variants.front().flaky);
    CHECK(r.methods.at("A::bump/0").classification.label == ClassificationLabel::required);
  }
  SUBCASE("failure inside the covering tests is not retried") {
    FakeAdapter fake(sample_methods());
    fake.script("A::bump/0", "strip_body", {FakeAdapter::failing({"t1"})});
    const auto r = analyze(fake, "/fake", quiet_config());
    CHECK(fake.runs_of("A::bump/0", "strip_body") == 2);  // once more for the cache check
    CHECK_FALSE(r.methods.at("A::bump/0").variants.front().flaky);
  }
}

TEST_CASE("include and exclude globs mark methods user-filtered") {
  FakeAdapter fake(sample_methods());
  auto cfg = quiet_config();
  cfg.report.exclude = {"A::flag/*"};
  const auto r = analyze(fake, "/fake", cfg);
  CHECK(r.methods.at("A::flag/0").inclusion.exclusion_reason == ExclusionReason::user_filtered);
  CHECK(r.methods.at("A::flag/0").classification.label == ClassificationLabel::excluded);
  CHECK(r.methods.at("A::get/0").inclusion.exclusion_reason == ExclusionReason::getter_or_setter);
}

TEST_CASE("reports do not depend on the number of jobs") {
  std::vector<FakeMethod> many;
  for (int i = 0; i < 24; ++i)
    many.push_back({"M::f" + std::to_string(i) + "/0", kAllReturnCategories[i % 8], {}, {"t" + std::to_string(i % 5)}});
  auto run = [&](int jobs, unsigned seed) {
    FakeAdapter fake(many, seed);
    for (int i = 0; i < 24; i += 3)
      fake.script(many[i].id, transformations_for(many[i].category).back().name(),
                  {FakeAdapter::failing({"t" + std::to_string(i % 5)})});
    auto cfg = quiet_config();
    cfg.jobs = jobs;
    EmitOptions no_time;
    no_time.include_timings = false;
    return render_json(analyze(fake, "/fake", cfg), no_time);
  };
  const auto serial = run(1, 0);
  for (int jobs : {2, 4, 8}) CHECK(run(jobs, 100 + jobs) == serial);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  for (int jobs : {1, 3, 8}) {
    std::vector<int> hits(50, 0);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
  CHECK_THROWS_AS(parallel_for(20, 4,
                               [](std::size_t i) {
                                 if (i == 7) throw ContractViolation("boom");
                               }),
                  ContractViolation);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("partition invariants hold on randomized reports") {
  std::mt19937 rng(8);
  for (int round = 0; round < 500; ++round) {
    const auto r = random_report(rng);
    CHECK_NOTHROW(verify_report_invariants(r));
    std::set<std::string> all, seen;
    for (const auto& [id, m] : r.methods) all.insert(id);
    std::size_t labelled = 0;
    for (auto label : {ClassificationLabel::pseudo_tested, ClassificationLabel::required,
                       ClassificationLabel::not_covered, ClassificationLabel::excluded,
                       ClassificationLabel::unassessable}) {
      for (const auto& id : r.ids_with(label)) {
        CHECK(seen.insert(id).second);
        ++labelled;
      }
    }
    CHECK(seen == all);
    CHECK(labelled == all.size());
    for (const auto& id : r.ids_with(ClassificationLabel::pseudo_tested)) CHECK(r.coverage.covered.count(id));
  }
}

TEST_CASE("invariant check rejects broken reports") {
  std::mt19937 rng(12);
  int broken = 0;
  for (int round = 0; round < 200 && broken < 50; ++round) {
    auto r = random_report(rng);
    for (auto& [id, m] : r.methods) {
      if (m.classification.label != ClassificationLabel::not_covered) continue;
      m.classification.label = ClassificationLabel::pseudo_tested;
      CHECK_THROWS_AS(verify_report_invariants(r), ContractViolation);
      ++broken;
      break;
    }
  }
  CHECK(broken > 10);
}
