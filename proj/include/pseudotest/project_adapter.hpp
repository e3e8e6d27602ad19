#pragma once

// The boundary the engine talks to. One concrete implementation ships for
// Makefile + doctest projects; tests substitute in-memory fakes.

#include <memory>
#include <optional>
#include <set>
#include <string>

#include "pseudotest/coverage_probe.hpp"
#include "pseudotest/target_adapter.hpp"

namespace pseudotest {

class TargetAdapter {
 public:
  virtual ~TargetAdapter() = default;

  virtual MethodInventory discover(const fs::path& project_root) = 0;
  virtual SourcePatch synthesize_variant(const MethodInventory& inventory, const std::string& method_id,
                                         const TransformationSpec& spec) = 0;
  /// Current bytes of one inventory file, for mutant generation.
  virtual std::string read_source(const MethodInventory& inventory, const std::string& file) = 0;

  /// Builds the pristine project once and verifies the suite is green and stable.
  virtual Baseline prepare(const MethodInventory& inventory, Millis budget) = 0;
  virtual CoverageMap measure_coverage(const MethodInventory& inventory, Millis budget) = 0;

  /// Runs the suite against one patch applied to a pristine copy. Must be
  /// safe to call concurrently once prepare() returned.
  virtual SuiteOutcome run_patched(const SourcePatch& patch, const std::optional<std::set<std::string>>& selection,
                                   Millis budget, bool full_rebuild) = 0;
};

class MakefileDoctestAdapter final : public TargetAdapter {
 public:
  explicit MakefileDoctestAdapter(Toolchain toolchain = Toolchain::from_environment());

  MethodInventory discover(const fs::path& project_root) override;
  SourcePatch synthesize_variant(const MethodInventory& inventory, const std::string& method_id,
                                 const TransformationSpec& spec) override;
  std::string read_source(const MethodInventory& inventory, const std::string& file) override;
  Baseline prepare(const MethodInventory& inventory, Millis budget) override;
  CoverageMap measure_coverage(const MethodInventory& inventory, Millis budget) override;
  SuiteOutcome run_patched(const SourcePatch& patch, const std::optional<std::set<std::string>>& selection,
                           Millis budget, bool full_rebuild) override;

 private:
  ExecutionOptions options_;
  fs::path project_root_;
  std::unique_ptr<Workspace> prebuilt_;
};

}  // namespace pseudotest
