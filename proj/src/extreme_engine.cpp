#include "pseudotest/extreme_engine.hpp"

#include <fnmatch.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pseudotest/errors.hpp"
#include "pseudotest/metrics_stats.hpp"
#include "pseudotest/mutation_baseline.hpp"

namespace pseudotest {
namespace {

using Clock = std::chrono::steady_clock;

Millis since(Clock::time_point t0) { return std::chrono::duration_cast<Millis>(Clock::now() - t0); }

struct VariantTask {
  std::string method_id;
  std::vector<TransformationSpec> specs;  // one spec, or the whole list in fast mode
};

struct TaskResult {
  std::vector<VariantOutcome> outcomes;
  std::vector<std::string> warnings;
};

bool disjoint(const std::vector<std::string>& failing, const std::set<std::string>& covering) {
  for (const auto& t : failing)
    if (covering.count(t)) return false;
  return true;
}

VariantOutcome to_outcome(const std::string& method_id, const TransformationSpec& spec, const SuiteOutcome& o,
                          Millis duration) {
  VariantOutcome v;
  v.method_id = method_id;
  v.spec = spec;
  v.detection = detection_for(o.status);
  v.failing_tests = o.failing_tests;
  v.failure_kind = o.failure_kind;
  v.duration = duration;
  return v;
}

}  // namespace

Millis timeout_budget(const Baseline& baseline, double factor, double constant_s) {
  Micros slowest{0};
  for (const auto& [name, t] : baseline.per_test_times) slowest = std::max(slowest, t);
  const double ms = static_cast<double>(slowest.count()) / 1000.0 * factor + constant_s * 1000.0;
  return Millis(static_cast<long long>(std::ceil(ms)));
}

bool user_selected(const std::string& id, const std::vector<std::string>& include,
                   const std::vector<std::string>& exclude) {
  auto matches = [&](const std::string& pattern) { return ::fnmatch(pattern.c_str(), id.c_str(), 0) == 0; };
  if (!include.empty() && std::none_of(include.begin(), include.end(), matches)) return false;
  return std::none_of(exclude.begin(), exclude.end(), matches);
}

Classification classify_method(const std::vector<VariantOutcome>& outcomes) {
  if (outcomes.empty()) return {ClassificationLabel::unassessable, std::string("no variant compiled")};
  for (const auto& o : outcomes) {
    if (o.method_id != outcomes.front().method_id)
      throw ContractViolation("outcomes mix methods " + outcomes.front().method_id + " and " + o.method_id);
    if (o.detection == Detection::compile_error)
      throw ContractViolation("compile_error outcome passed to classification for " + o.method_id);
  }
  for (const auto& o : outcomes)
    if (is_detected(o.detection)) return {ClassificationLabel::required, std::nullopt};
  return {ClassificationLabel::pseudo_tested, std::nullopt};
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

AnalysisReport analyze(TargetAdapter& adapter, const fs::path& project_root, const EngineConfig& config) {
  const auto t_start = Clock::now();
  auto say = [&](const std::string& msg) {
    if (config.progress) config.progress(msg);
  };

  AnalysisReport report;
  report.config = config.report;

  const MethodInventory inventory = adapter.discover(project_root);
  report.inventory_size = inventory.methods.size();
  report.source_digest = inventory.source_digest;
  say("discovered " + std::to_string(inventory.methods.size()) + " methods");

  auto t0 = Clock::now();
  const Baseline baseline = adapter.prepare(inventory, config.baseline_budget);
  report.timings.baseline = since(t0);
  const Millis budget =
      timeout_budget(baseline, config.report.timeout_factor, config.report.timeout_constant_s);
  report.timings.test_budget = budget;
  say("baseline green: " + std::to_string(baseline.test_count) + " tests, variant budget " +
      std::to_string(budget.count()) + " ms");

  t0 = Clock::now();
  report.coverage = adapter.measure_coverage(inventory, config.baseline_budget);
  report.timings.coverage = since(t0);

  // inclusion
  std::vector<const MethodDescriptor*> included;
  for (const auto& d : inventory.methods) {
    MethodReport m;
    m.id = d.id;
    m.file = d.file;
    m.return_category = d.return_category;
    m.visibility = d.visibility;
    const bool covered = report.coverage.covered.count(d.id) != 0;
    if (auto it = report.coverage.covering_tests.find(d.id); it != report.coverage.covering_tests.end())
      m.covering_tests.assign(it->second.begin(), it->second.end());
    m.inclusion = is_method_under_analysis(d, covered);
    if (m.inclusion.included && !user_selected(d.id, config.report.include, config.report.exclude))
      m.inclusion = InclusionDecision::exclude(ExclusionReason::user_filtered);
    if (!m.inclusion.included) m.classification = classification_for_exclusion(*m.inclusion.exclusion_reason);
    else included.push_back(&d);
    report.methods.emplace(d.id, std::move(m));
  }
  say(std::to_string(included.size()) + " methods under analysis");

  auto selection_for = [&](const std::string& id) -> std::optional<std::set<std::string>> {
    if (config.report.full_suite_mode) return std::nullopt;
    const auto& tests = report.methods.at(id).covering_tests;
    return std::set<std::string>(tests.begin(), tests.end());
  };

  // variants
  std::vector<VariantTask> tasks;
  for (const auto* d : included) {
    const auto specs = transformations_for(d->return_category);
    if (config.report.fast_mode) {
      tasks.push_back({d->id, specs});
    } else {
      for (const auto& s : specs) tasks.push_back({d->id, {s}});
    }
  }

  t0 = Clock::now();
  std::vector<TaskResult> results(tasks.size());
  parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
    const auto& task = tasks[i];
    const auto selection = selection_for(task.method_id);
    const auto& covering = report.methods.at(task.method_id).covering_tests;
    const std::set<std::string> covering_set(covering.begin(), covering.end());
    for (const auto& spec : task.specs) {
      const auto patch = adapter.synthesize_variant(inventory, task.method_id, spec);
      const auto started = Clock::now();
      auto outcome = to_outcome(task.method_id, spec, adapter.run_patched(patch, selection, budget, false), {});
      if (is_detected(outcome.detection) && !outcome.failing_tests.empty() &&
          disjoint(outcome.failing_tests, covering_set)) {
        const auto retry = adapter.run_patched(patch, selection, budget, false);
        outcome.flaky = true;
        if (retry.status == SuiteStatus::all_passed) {
          outcome = to_outcome(task.method_id, spec, retry, {});
          outcome.flaky = true;
          results[i].warnings.push_back(task.method_id + " " + spec.name() +
                                        ": failure outside covering tests did not reproduce; counted undetected");
        } else {
          results[i].warnings.push_back(task.method_id + " " + spec.name() +
                                        ": detected only by tests that never reach the method; possible flakiness");
        }
      }
      outcome.duration = since(started);
      const bool detected = is_detected(outcome.detection);
      results[i].outcomes.push_back(std::move(outcome));
      if (config.report.fast_mode && detected) break;
    }
  });
  report.timings.variants = since(t0);

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto& m = report.methods.at(tasks[i].method_id);
    for (auto& o : results[i].outcomes) m.variants.push_back(std::move(o));
    for (auto& w : results[i].warnings) report.warnings.push_back(std::move(w));
  }
  for (const auto* d : included) {
    auto& m = report.methods.at(d->id);
    std::vector<VariantOutcome> valid;
    for (const auto& v : m.variants)
      if (v.detection != Detection::compile_error) valid.push_back(v);
    m.classification = classify_method(valid);
    if (m.classification.label == ClassificationLabel::unassessable)
      m.classification.reason = "all variants failed to compile";
  }

  // the build cache must not change verdicts
  if (config.verify_build_cache && !tasks.empty()) {
    const auto& first = report.methods.at(tasks.front().method_id).variants.front();
    const auto patch = adapter.synthesize_variant(inventory, first.method_id, first.spec);
    const auto rebuilt = adapter.run_patched(patch, selection_for(first.method_id), budget, true);
    report.cache_check = CacheCheck{first.method_id, first.spec.name(), first.detection, detection_for(rebuilt.status)};
    if (!report.cache_check->agreed())
      report.warnings.push_back("cached build verdict for " + first.method_id + " " + first.spec.name() +
                                " differs from a clean rebuild (" + std::string(to_string(first.detection)) +
                                " vs " + std::string(to_string(report.cache_check->rebuilt)) + ")");
  }

  // conventional mutants on assessed methods
  if (config.report.with_mutation_baseline) {
    t0 = Clock::now();
    std::vector<MutantSpec> mutants;
    std::map<std::string, std::string> sources;
    for (const auto* d : included) {
      const auto label = report.methods.at(d->id).classification.label;
      if (label != ClassificationLabel::pseudo_tested && label != ClassificationLabel::required) continue;
      auto it = sources.find(d->file);
      if (it == sources.end()) it = sources.emplace(d->file, adapter.read_source(inventory, d->file)).first;
      for (auto& mu : mutants_for(*d, it->second)) mutants.push_back(std::move(mu));
    }
    say("running " + std::to_string(mutants.size()) + " conventional mutants");
    std::vector<MutantOutcome> mutant_results(mutants.size());
    parallel_for(mutants.size(), config.jobs, [&](std::size_t i) {
      const auto& mu = mutants[i];
      const auto outcome = adapter.run_patched(mutant_patch(inventory, mu), selection_for(mu.method_id), budget, false);
      mutant_results[i] = {mu, detection_for(outcome.status), outcome.failure_kind};
    });
    const auto summary = summarize_mutants(mutant_results);
    for (auto& r : mutant_results) report.methods.at(r.mutant.method_id).mutants.push_back(std::move(r));
    for (const auto& [id, score] : summary.per_method_score) report.methods.at(id).mutation_score = score;
    report.timings.mutants = since(t0);
  }

  report.metrics = project_metrics(report);
  report.timings.total = since(t_start);
  verify_report_invariants(report);
  return report;
}

void verify_report_invariants(const AnalysisReport& report) {
  auto fail = [](const std::string& what) { throw ContractViolation("report invariant violated: " + what); };
  for (const auto& [id, m] : report.methods) {
    if (id != m.id) fail("key " + id + " does not match method id " + m.id);
    const bool covered = report.coverage.covered.count(id) != 0;
    const auto label = m.classification.label;
    if (m.inclusion.included != !m.inclusion.exclusion_reason.has_value())
      fail(id + " inclusion flag disagrees with its reason");
    if ((label == ClassificationLabel::not_covered) != !covered) fail(id + " not_covered label disagrees with coverage");
    if (label == ClassificationLabel::pseudo_tested && !covered) fail(id + " is pseudo-tested but not covered");
    const bool assessed_label = label == ClassificationLabel::pseudo_tested || label == ClassificationLabel::required ||
                                label == ClassificationLabel::unassessable;
    if (assessed_label != m.inclusion.included) fail(id + " label " + std::string(to_string(label)) +
                                                     " disagrees with inclusion");
    if (label == ClassificationLabel::excluded && (!covered || m.inclusion.included))
      fail(id + " excluded label needs a covered, filtered method");
    if (m.inclusion.included) {
      std::vector<VariantOutcome> valid;
      for (const auto& v : m.variants)
        if (v.detection != Detection::compile_error) valid.push_back(v);
      if (classify_method(valid).label != label) fail(id + " classification disagrees with its variant outcomes");
    } else if (!m.variants.empty()) {
      fail(id + " has variants but is not under analysis");
    }
  }
  for (const auto& id : report.coverage.covered)
    if (!report.methods.count(id)) fail("covered id " + id + " is not in the inventory");
  if (project_metrics(report) != report.metrics) fail("metrics do not match the per-method map");
}

}  // namespace pseudotest
