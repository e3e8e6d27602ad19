#pragma once

// Everything specific to the host ecosystem: C++ projects with a root
// Makefile, production sources under src/ (and include/), doctest tests under
// tests/, and a test binary at build/tests.

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pseudotest/method_model.hpp"

namespace pseudotest {

namespace fs = std::filesystem;
using Millis = std::chrono::milliseconds;
using Micros = std::chrono::microseconds;

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string content_digest(std::string_view bytes);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view bytes);

struct MethodInventory {
  fs::path project_root;
  std::vector<MethodDescriptor> methods;
  std::string source_digest;
  std::map<std::string, std::string> file_digests;  // relative path -> content digest

  const MethodDescriptor* find(std::string_view id) const;
  const MethodDescriptor& at(std::string_view id) const;  // throws ContractViolation
};

struct SourcePatch {
  std::string file;
  SourceSpan span;
  std::string replacement;
  std::string method_id;
  std::optional<TransformationSpec> transformation;  // absent for conventional mutants
  std::string label;                                 // transformation name or mutation operator
  std::string file_digest;                           // digest of the file the span refers to

  friend bool operator==(const SourcePatch&, const SourcePatch&) = default;
};

enum class SuiteStatus { all_passed, failures, timeout, crashed, compile_error };

/// What the failing tests reported, when the framework tells them apart.
enum class FailureKind { none, assertion, exception, mixed };

std::string_view to_string(SuiteStatus);
std::string_view to_string(FailureKind);
FailureKind failure_kind_from_string(std::string_view);

struct SuiteOutcome {
  SuiteStatus status = SuiteStatus::all_passed;
  std::vector<std::string> failing_tests;  // sorted, unique
  Millis wall_time{0};                     // test run phase
  Millis build_time{0};
  std::string log_excerpt;
  FailureKind failure_kind = FailureKind::none;
  std::map<std::string, Micros> test_times;
  int test_count = 0;
};

struct Baseline {
  bool suite_green = false;
  int test_count = 0;
  Millis nominal_suite_time{0};
  std::map<std::string, Micros> per_test_times;
};

/// Build and test commands for the host ecosystem.
struct Toolchain {
  std::string build_command = "make -s";
  std::string test_binary = "build/tests";
  fs::path support_dir;  // probe header and doctest, exported to builds as PSEUDOTEST_SUPPORT
  Millis build_budget{std::chrono::minutes(5)};

  /// Honors PSEUDOTEST_BUILD_CMD, PSEUDOTEST_TEST_BINARY and PSEUDOTEST_SUPPORT_DIR.
  static Toolchain from_environment();
};

/// A private copy of a project under the temp directory, removed on
/// destruction unless PSEUDOTEST_KEEP_WORKSPACES is set.
class Workspace {
 public:
  /// Copies `source` (without its build/ directory unless include_build)
  /// preserving modification times, so make sees cached objects as fresh.
  static Workspace copy_of(const fs::path& source, bool include_build, std::string_view label = "ws");

  Workspace clone(std::string_view label = "ws") const { return copy_of(root_, true, label); }

  Workspace(Workspace&& other) noexcept;
  Workspace& operator=(Workspace&& other) noexcept;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  ~Workspace();

  const fs::path& root() const noexcept { return root_; }

 private:
  explicit Workspace(fs::path root) : root_(std::move(root)) {}
  fs::path root_;
};

/// Rewrites one file of a workspace. Returns the original bytes so callers
/// can restore them. Throws StaleInventoryError if the file's digest differs
/// from the one the patch was synthesized against.
std::string apply_patch(const fs::path& workspace_root, const SourcePatch& patch);
void restore_file(const fs::path& workspace_root, const std::string& file, std::string_view original);

bool is_project(const fs::path& root);

/// One descriptor per function definition in non-test sources, constructors
/// and destructors omitted, in (file path, source position) order.
MethodInventory discover(const fs::path& project_root);

/// The method body rendered for an extreme transformation.
std::string render_variant_body(const MethodDescriptor& method, const TransformationSpec& spec);

SourcePatch synthesize_variant(const MethodInventory& inventory, std::string_view method_id,
                               const TransformationSpec& spec);

struct ExecutionOptions {
  Toolchain toolchain = Toolchain::from_environment();
  std::map<std::string, std::string> extra_env;
  bool skip_build = false;
};

/// Builds the workspace, then runs the selected tests (all when nullopt)
/// under `budget`.
SuiteOutcome execute_suite(const fs::path& workspace, const std::optional<std::set<std::string>>& selection,
                           Millis budget, const ExecutionOptions& options = {});

/// Two full runs on an already-populated workspace. Throws BaselineError on a
/// red or flaky suite.
Baseline verify_baseline_in(const fs::path& workspace, Millis budget, const ExecutionOptions& options = {});

/// Same, on a fresh copy of `project_root`.
Baseline verify_baseline(const fs::path& project_root, Millis budget, const ExecutionOptions& options = {});

struct JUnitCase {
  std::string name;
  double seconds = 0.0;
  int failures = 0;
  int errors = 0;
};

/// Test cases from doctest's JUnit report; nullopt if the document is not one.
std::optional<std::vector<JUnitCase>> parse_junit_report(std::string_view xml);

}  // namespace pseudotest
