#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <random>

#include "common/paths.hpp"
#include "common/synthetic.hpp"
#include "pseudotest/errors.hpp"
#include "pseudotest/report.hpp"

using namespace pseudotest;
using namespace pseudotest::testing;

namespace {

AnalysisReport scored_report() {
  AnalysisReport r;
  r.config.project_root = "/work/anyofany";
  r.inventory_size = 2;
  r.source_digest = "00000000000000aa";
  r.coverage.covered = {"G::guard/1", "G::run/1"};
  r.coverage.covering_tests = {{"G::guard/1", {"two inputs"}}, {"G::run/1", {"two inputs"}}};
  r.coverage.probe_log_digest = "00000000000000bb";

  MethodReport guard;
  guard.id = "G::guard/1";
  guard.file = "src/g.cpp";
  guard.covering_tests = {"two inputs"};
  guard.variants = {{guard.id, TransformationSpec::strip_body(), Detection::undetected, {}, Millis(0), FailureKind::none, false}};
  guard.classification = {ClassificationLabel::pseudo_tested, std::nullopt};
  for (int i = 0; i < 5; ++i)
    guard.mutants.push_back({{guard.id, MutationOperator::negate_conditional, {10u + i, 11u + i}, ">="},
                             i < 2 ? Detection::detected_failure : Detection::undetected,
                             i < 2 ? FailureKind::exception : FailureKind::none});
  guard.mutation_score = 0.4;

  MethodReport run;
  run.id = "G::run/1";
  run.file = "src/g.cpp";
  run.return_category = ReturnCategory::boolean;
  run.covering_tests = {"two inputs"};
  run.variants = {
      {run.id, TransformationSpec::fixed_return(ConstantTag::true_val), Detection::detected_failure, {"two inputs"}, Millis(0), FailureKind::assertion, false},
      {run.id, TransformationSpec::fixed_return(ConstantTag::false_val), Detection::undetected, {}, Millis(0), FailureKind::none, false}};
  run.classification = {ClassificationLabel::required, std::nullopt};
  for (int i = 0; i < 17; ++i)
    run.mutants.push_back({{run.id, MutationOperator::arithmetic_replacement, {40u + i, 41u + i}, "+"},
                           i < 9 ? Detection::detected_failure : Detection::undetected, FailureKind::assertion});
  run.mutation_score = 9.0 / 17.0;

  r.methods = {{guard.id, guard}, {run.id, run}};
  r.config.with_mutation_baseline = true;
  r.metrics = metrics_from_counts(2, 2, 2, 1);
  r.metrics.ms_pseudo = 0.4;
  r.metrics.ms_req = 9.0 / 17.0;
  return r;
}

std::string golden(const std::string& name, const std::string& actual) {
  const auto path = fs::path(PSEUDOTEST_TEST_GOLDEN) / name;
  if (std::getenv("PSEUDOTEST_UPDATE_GOLDEN")) write_file(path, actual);
  return read_file(path);
}

EmitOptions without_timings() {
  EmitOptions o;
  o.include_timings = false;
  return o;
}

}  // namespace

TEST_CASE("json round trip on randomized reports") {
  std::mt19937 rng(31);
  for (int round = 0; round < 300; ++round) {
    const auto r = random_report(rng);
    const auto text = render_json(r);
    const auto back = report_from_json(nlohmann::json::parse(text));
    CHECK(back == r);
    CHECK(render_json(back) == text);
  }
}

TEST_CASE("emission is deterministic") {
  std::mt19937 rng(32);
  for (int round = 0; round < 50; ++round) {
    const auto r = random_report(rng);
    auto copy = r;
    CHECK(render_json(r) == render_json(copy));
    CHECK(render_markdown(r) == render_markdown(copy));
    CHECK(render_html(r) == render_html(copy));
  }
}

TEST_CASE("json keys are sorted and methods ordered by id") {
  std::mt19937 rng(33);
  const auto r = random_report(rng, 40);
  const auto doc = nlohmann::json::parse(render_json(r));
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  std::vector<std::string> ids;
  for (const auto& m : doc.at("methods")) ids.push_back(m.at("id"));
  CHECK(std::is_sorted(ids.begin(), ids.end()));
  CHECK(doc.at("schema_version") == 1);
}

TEST_CASE("timings can be left out") {
  const auto r = scored_report();
  const auto doc = report_to_json(r, without_timings());
  CHECK_FALSE(doc.contains("timings"));
  for (const auto& m : doc.at("methods"))
    for (const auto& v : m.at("variants")) CHECK_FALSE(v.contains("duration_ms"));
}

TEST_CASE("schema self-check rejects malformed documents") {
  auto doc = report_to_json(scored_report());
  CHECK_NOTHROW(validate_report_json(doc));
  auto missing = doc;
  missing.erase("summary");
  CHECK_THROWS_AS(validate_report_json(missing), InternalError);
  auto unsorted = doc;
  std::swap(unsorted["methods"][0], unsorted["methods"][1]);
  CHECK_THROWS_AS(validate_report_json(unsorted), InternalError);
  auto bad_label = doc;
  bad_label["methods"][0]["classification"] = "maybe";
  CHECK_THROWS_AS(validate_report_json(bad_label), InternalError);
  CHECK_THROWS_AS(report_from_json(nlohmann::json::object()), ContractViolation);
}

TEST_CASE("markdown for an empty analysis") {
  AnalysisReport empty;
  empty.config.project_root = "/work/empty";
  const auto md = render_markdown(empty, without_timings());
  CHECK(md.find("| 0 | 0 | n/a | 0 | 0 | n/a | n/a | n/a |") != std::string::npos);
  CHECK(md.find("## Pseudo-tested methods") == std::string::npos);
  const auto table = md.find("| Method | Classification |");
  REQUIRE(table != std::string::npos);
  // header and separator only
  CHECK(md.find("| `", table) == std::string::npos);
}

TEST_CASE("markdown lists pseudo-tested methods with covering tests") {
  const auto md = render_markdown(scored_report(), without_timings());
  CHECK(md.find("- `G::guard/1` in `src/g.cpp`, variants strip_body, covered by two inputs") != std::string::npos);
  CHECK(md.find("| 2 | 2 | 100% | 2 | 1 | 50% | 40.0% | 52.9% |") != std::string::npos);
}

TEST_CASE("html shows both mutation scores to one decimal") {
  const auto html = render_html(scored_report(), without_timings());
  CHECK(html.find("id=\"ms-pseudo\">40.0%<") != std::string::npos);
  CHECK(html.find("id=\"ms-req\">52.9%<") != std::string::npos);
  CHECK(html.find("http") == std::string::npos);
  CHECK(html.find("<script") == std::string::npos);
  CHECK(html == golden("scored_report.html", html));
}

TEST_CASE("emit writes one file per format and reports unwritable paths") {
  const auto r = scored_report();
  const auto dir = fs::temp_directory_path() / ("pseudotest-emit-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  for (auto f : {ReportFormat::json, ReportFormat::markdown, ReportFormat::html}) {
    const auto paths = emit_report(r, f, dir);
    REQUIRE(paths.size() == 1);
    CHECK(fs::exists(paths[0]));
  }
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "report.md"));
  CHECK(fs::exists(dir / "report.html"));
  write_file(dir / "blocker", "x");
  CHECK_THROWS_AS(emit_report(r, ReportFormat::json, dir / "blocker" / "sub"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("format names") {
  CHECK(report_format_from_string("md") == ReportFormat::markdown);
  CHECK(report_format_from_string("html") == ReportFormat::html);
  CHECK_THROWS_AS(report_format_from_string("pdf"), ContractViolation);
}
