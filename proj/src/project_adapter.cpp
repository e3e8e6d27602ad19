#include "pseudotest/project_adapter.hpp"

#include "pseudotest/errors.hpp"

namespace pseudotest {

MakefileDoctestAdapter::MakefileDoctestAdapter(Toolchain toolchain) { options_.toolchain = std::move(toolchain); }

MethodInventory MakefileDoctestAdapter::discover(const fs::path& project_root) {
  project_root_ = project_root;
  return pseudotest::discover(project_root);
}

SourcePatch MakefileDoctestAdapter::synthesize_variant(const MethodInventory& inventory, const std::string& method_id,
                                                       const TransformationSpec& spec) {
  return pseudotest::synthesize_variant(inventory, method_id, spec);
}

std::string MakefileDoctestAdapter::read_source(const MethodInventory& inventory, const std::string& file) {
  const std::string text = read_file(inventory.project_root / file);
  const auto it = inventory.file_digests.find(file);
  if (it == inventory.file_digests.end() || content_digest(text) != it->second)
    throw StaleInventoryError(file + " changed since discovery");
  return text;
}

Baseline MakefileDoctestAdapter::prepare(const MethodInventory& inventory, Millis budget) {
  project_root_ = inventory.project_root;
  prebuilt_ = std::make_unique<Workspace>(Workspace::copy_of(project_root_, false, "baseline"));
  return verify_baseline_in(prebuilt_->root(), budget, options_);
}

CoverageMap MakefileDoctestAdapter::measure_coverage(const MethodInventory& inventory, Millis budget) {
  auto probed = instrument(inventory);
  ExecutionOptions opts = options_;
  opts.extra_env["PSEUDOTEST_PROBE_LOG"] = probed.log_path.string();
  const auto outcome = execute_suite(probed.workspace.root(), std::nullopt, budget, opts);
  if (outcome.status != SuiteStatus::all_passed)
    throw InstrumentationError("probed suite is not green (" + std::string(to_string(outcome.status)) + ")\n" +
                               outcome.log_excerpt);
  const std::string log = fs::exists(probed.log_path) ? read_file(probed.log_path) : std::string();
  auto coverage = covered_methods(log);
  check_coverage_against(coverage, inventory);
  return coverage;
}

SuiteOutcome MakefileDoctestAdapter::run_patched(const SourcePatch& patch,
                                                 const std::optional<std::set<std::string>>& selection,
                                                 Millis budget, bool full_rebuild) {
  if (!full_rebuild && !prebuilt_) throw ContractViolation("run_patched before prepare");
  Workspace ws = full_rebuild ? Workspace::copy_of(project_root_, false, "rebuild") : prebuilt_->clone("variant");
  apply_patch(ws.root(), patch);
  return execute_suite(ws.root(), selection, budget, options_);
}

}  // namespace pseudotest
