#pragma once

// In-memory TargetAdapter: verdicts come from a table, nothing is built.

#include <map>
#include <mutex>
#include <random>
#include <thread>
#include <utility>

#include "pseudotest/errors.hpp"
#include "pseudotest/project_adapter.hpp"

namespace pseudotest::testing {

struct FakeMethod {
  std::string id;
  ReturnCategory category = ReturnCategory::unit;
  StructuralFlags flags;
  std::set<std::string> covering;  // empty = not covered
};

class FakeAdapter final : public TargetAdapter {
 public:
  explicit FakeAdapter(std::vector<FakeMethod> methods, unsigned jitter_seed = 0)
      : methods_(std::move(methods)), rng_(jitter_seed), jitter_(jitter_seed != 0) {}

  /// Successive runs of (id, variant label) return these outcomes in turn;
  /// the last one repeats. Unlisted pairs pass.
  void script(const std::string& id, const std::string& label, std::vector<SuiteOutcome> outcomes) {
    script_[{id, label}] = std::move(outcomes);
  }

  static SuiteOutcome failing(std::vector<std::string> tests) {
    SuiteOutcome o;
    o.status = SuiteStatus::failures;
    o.failing_tests = std::move(tests);
    o.failure_kind = FailureKind::assertion;
    return o;
  }
  static SuiteOutcome with_status(SuiteStatus s) {
    SuiteOutcome o;
    o.status = s;
    return o;
  }

  int runs_of(const std::string& id, const std::string& label) const {
    std::lock_guard lock(mutex_);
    auto it = calls_.find({id, label});
    return it == calls_.end() ? 0 : it->second;
  }
  int full_rebuilds() const { return full_rebuilds_; }
  const std::vector<std::optional<std::set<std::string>>>& selections() const { return selections_; }

  MethodInventory discover(const fs::path& root) override {
    MethodInventory inv;
    inv.project_root = root;
    std::size_t offset = 0;
    for (const auto& m : methods_) {
      MethodDescriptor d;
      d.id = m.id;
      d.file = "src/fake.cpp";
      d.span = {offset, offset + 10};
      offset += 20;
      d.return_category = m.category;
      d.flags = m.flags;
      d.name = m.id;
      d.qualified_name = m.id;
      inv.methods.push_back(d);
    }
    inv.source_digest = "fake";
    inv.file_digests["src/fake.cpp"] = "fake";
    return inv;
  }

  SourcePatch synthesize_variant(const MethodInventory& inventory, const std::string& id,
                                 const TransformationSpec& spec) override {
    const auto& d = inventory.at(id);
    if (!admissible(spec, d.return_category)) throw ContractViolation("inadmissible spec");
    return {d.file, d.span, spec.name(), id, spec, spec.name(), "fake"};
  }

  std::string read_source(const MethodInventory&, const std::string&) override { return {}; }

  Baseline prepare(const MethodInventory&, Millis) override {
    Baseline b;
    b.suite_green = true;
    std::set<std::string> tests;
    for (const auto& m : methods_) tests.insert(m.covering.begin(), m.covering.end());
    b.test_count = static_cast<int>(tests.size());
    for (const auto& t : tests) b.per_test_times[t] = Micros(1500);
    return b;
  }

  CoverageMap measure_coverage(const MethodInventory&, Millis) override {
    CoverageMap c;
    for (const auto& m : methods_) {
      if (m.covering.empty()) continue;
      c.covered.insert(m.id);
      c.covering_tests[m.id] = m.covering;
    }
    c.probe_log_digest = "fake";
    return c;
  }

  SuiteOutcome run_patched(const SourcePatch& patch, const std::optional<std::set<std::string>>& selection, Millis,
                           bool full_rebuild) override {
    unsigned pause = 0;
    SuiteOutcome out;
    {
      std::lock_guard lock(mutex_);
      if (full_rebuild) ++full_rebuilds_;
      selections_.push_back(selection);
      const std::pair key{patch.method_id, patch.label};
      const int n = calls_[key]++;
      if (auto it = script_.find(key); it != script_.end() && !it->second.empty())
        out = it->second[std::min<std::size_t>(static_cast<std::size_t>(n), it->second.size() - 1)];
      if (jitter_) pause = std::uniform_int_distribution<unsigned>(0, 3)(rng_);
    }
    if (pause) std::this_thread::sleep_for(std::chrono::milliseconds(pause));
    return out;
  }

 private:
  std::vector<FakeMethod> methods_;
  std::map<std::pair<std::string, std::string>, std::vector<SuiteOutcome>> script_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, int> calls_;
  std::vector<std::optional<std::set<std::string>>> selections_;
  int full_rebuilds_ = 0;
  std::mt19937 rng_;
  bool jitter_;
};

}  // namespace pseudotest::testing
