#include "pseudotest/target_adapter.hpp"

#include <stdlib.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pseudotest/errors.hpp"
#include "pseudotest/source_syntax.hpp"
#include "pseudotest/subprocess.hpp"

#ifndef PSEUDOTEST_DEFAULT_SUPPORT_DIR
#define PSEUDOTEST_DEFAULT_SUPPORT_DIR ""
#endif

namespace pseudotest {
namespace {

constexpr std::string_view kStatusNames[] = {"all_passed", "failures", "timeout", "crashed", "compile_error"};
constexpr std::string_view kFailureKindNames[] = {"none", "assertion", "exception", "mixed"};

const char* env_or_null(const char* name) {
  const char* v = std::getenv(name);
  return (v && *v) ? v : nullptr;
}

bool is_source_file(const fs::path& p) {
  static const std::set<std::string> kExt = {".cpp", ".cc", ".cxx", ".c++", ".hpp", ".hh", ".hxx", ".h", ".ipp"};
  return kExt.count(p.extension().string()) != 0;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string xml_unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos) {
      out += s[i];
      continue;
    }
    const auto ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (!ent.empty() && ent[0] == '#') {
      const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
      const long code = std::strtol(std::string(ent.substr(hex ? 2 : 1)).c_str(), nullptr, hex ? 16 : 10);
      if (code > 0 && code < 128) out += static_cast<char>(code);
    } else {
      out += std::string(s.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

std::optional<std::string> xml_attribute(std::string_view tag, std::string_view name) {
  const std::string key = " " + std::string(name) + "=\"";
  const auto pos = tag.find(key);
  if (pos == std::string_view::npos) return std::nullopt;
  const auto start = pos + key.size();
  const auto end = tag.find('"', start);
  if (end == std::string_view::npos) return std::nullopt;
  return xml_unescape(tag.substr(start, end - start));
}

std::string escape_filter(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == ',' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::map<std::string, std::string> build_env(const ExecutionOptions& options) {
  std::map<std::string, std::string> env = options.extra_env;
  if (!options.toolchain.support_dir.empty()) env["PSEUDOTEST_SUPPORT"] = options.toolchain.support_dir.string();
  return env;
}

const std::vector<std::string> kUnsetForChildren = {"MAKEFLAGS", "MFLAGS", "MAKELEVEL", "MAKEOVERRIDES"};

std::string normalize_type_for_static(const std::string& return_type) {
  std::vector<Token> kept;
  for (auto& tk : tokenize(return_type)) {
    if (tk.is("const") || tk.is("volatile") || tk.is("&") || tk.is("&&")) continue;
    kept.push_back(tk);
  }
  return render_tokens(kept);
}

}  // namespace

std::string_view to_string(SuiteStatus s) { return kStatusNames[static_cast<int>(s)]; }
std::string_view to_string(FailureKind k) { return kFailureKindNames[static_cast<int>(k)]; }
FailureKind failure_kind_from_string(std::string_view s) {
  for (int i = 0; i < 4; ++i)
    if (kFailureKindNames[i] == s) return static_cast<FailureKind>(i);
  throw ContractViolation("unknown failure kind '" + std::string(s) + "'");
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

const MethodDescriptor* MethodInventory::find(std::string_view id) const {
  for (const auto& m : methods)
    if (m.id == id) return &m;
  return nullptr;
}

const MethodDescriptor& MethodInventory::at(std::string_view id) const {
  if (const auto* m = find(id)) return *m;
  throw ContractViolation("method '" + std::string(id) + "' is not in the inventory");
}

Toolchain Toolchain::from_environment() {
  Toolchain t;
  if (const char* v = env_or_null("PSEUDOTEST_BUILD_CMD")) t.build_command = v;
  if (const char* v = env_or_null("PSEUDOTEST_TEST_BINARY")) t.test_binary = v;
  if (const char* v = env_or_null("PSEUDOTEST_SUPPORT_DIR")) t.support_dir = v;
  else t.support_dir = PSEUDOTEST_DEFAULT_SUPPORT_DIR;
  return t;
}

Workspace Workspace::copy_of(const fs::path& source, bool include_build, std::string_view label) {
  if (!fs::is_directory(source)) throw EnvironmentError("not a directory: " + source.string());
  fs::path parent = fs::temp_directory_path();
  if (const char* v = env_or_null("PSEUDOTEST_WORK_DIR")) parent = v;
  fs::create_directories(parent);
  std::string templ = (parent / ("pseudotest-" + std::string(label) + "-XXXXXX")).string();
  if (!::mkdtemp(templ.data())) throw EnvironmentError("cannot create workspace under " + parent.string());
  Workspace ws{fs::path(templ)};

  const auto src = fs::canonical(source);
  for (auto it = fs::recursive_directory_iterator(src); it != fs::recursive_directory_iterator(); ++it) {
    const auto rel = fs::relative(it->path(), src);
    const auto top = rel.begin()->string();
    if ((!include_build && (top == "build" || top == ".pseudotest")) || top == ".git") {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    const auto dst = ws.root_ / rel;
    if (it->is_directory()) {
      fs::create_directories(dst);
    } else if (it->is_regular_file()) {
      fs::copy_file(it->path(), dst, fs::copy_options::overwrite_existing);
      fs::last_write_time(dst, fs::last_write_time(it->path()));
    }
  }
  return ws;
}

Workspace::Workspace(Workspace&& other) noexcept : root_(std::move(other.root_)) { other.root_.clear(); }

Workspace& Workspace::operator=(Workspace&& other) noexcept {
  if (this != &other) {
    this->~Workspace();
    root_ = std::move(other.root_);
    other.root_.clear();
  }
  return *this;
}

Workspace::~Workspace() {
  if (root_.empty() || env_or_null("PSEUDOTEST_KEEP_WORKSPACES")) return;
  std::error_code ec;
  fs::remove_all(root_, ec);
}

std::string apply_patch(const fs::path& workspace_root, const SourcePatch& patch) {
  const auto path = workspace_root / patch.file;
  if (!fs::exists(path)) throw EnvironmentError("patch target missing: " + path.string());
  std::string original = read_file(path);
  if (content_digest(original) != patch.file_digest)
    throw StaleInventoryError(patch.file + " changed since discovery");
  if (patch.span.end > original.size() || patch.span.begin > patch.span.end)
    throw ContractViolation("patch span outside " + patch.file);
  std::string patched = original.substr(0, patch.span.begin) + patch.replacement + original.substr(patch.span.end);
  write_file(path, patched);
  fs::last_write_time(path, fs::file_time_type::clock::now());
  return original;
}

void restore_file(const fs::path& workspace_root, const std::string& file, std::string_view original) {
  const auto path = workspace_root / file;
  write_file(path, original);
  fs::last_write_time(path, fs::file_time_type::clock::now());
}

bool is_project(const fs::path& root) { return fs::is_regular_file(root / "Makefile"); }

MethodInventory discover(const fs::path& project_root) {
  if (!fs::is_directory(project_root)) throw NotAProjectError(project_root.string() + " is not a directory");
  if (!is_project(project_root)) throw NotAProjectError(project_root.string() + " has no Makefile");

  MethodInventory inv;
  inv.project_root = project_root;

  std::vector<std::string> files;
  for (const char* dir : {"src", "include"}) {
    const auto base = project_root / dir;
    if (!fs::is_directory(base)) continue;
    for (const auto& e : fs::recursive_directory_iterator(base))
      if (e.is_regular_file() && is_source_file(e.path()))
        files.push_back(fs::relative(e.path(), project_root).generic_string());
  }
  std::sort(files.begin(), files.end());

  struct FileParse {
    std::string path;
    ParsedSource parsed;
  };
  std::vector<FileParse> parsed;
  std::map<std::string, std::set<std::string>> fields;
  std::map<std::string, MemberDeclaration> declarations;
  std::string digest_input;

  for (const auto& rel : files) {
    const std::string text = read_file(project_root / rel);
    inv.file_digests[rel] = content_digest(text);
    digest_input += rel + '\0' + inv.file_digests[rel] + '\0';
    try {
      auto p = parse_source(text);
      for (auto& [cls, names] : p.class_fields) fields[cls].insert(names.begin(), names.end());
      for (auto& [key, decl] : p.member_declarations) {
        auto& slot = declarations[key];
        slot.deprecated = slot.deprecated || decl.deprecated;
        slot.access = decl.access;
      }
      parsed.push_back({rel, std::move(p)});
    } catch (const SyntaxError& e) {
      const auto [line, col] = line_col(text, e.offset());
      throw DiscoveryError(rel + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
  }
  inv.source_digest = content_digest(digest_input);

  for (auto& fp : parsed) {
    for (auto& node : fp.parsed.functions) {
      if (node.is_constructor) continue;
      const std::string qualified = node.qualified_name();
      const std::string key = qualified + "/" + std::to_string(node.arity());
      if (node.owner_is_class) {
        const auto owner = join_qualified(node.container, "");
        if (auto it = fields.find(owner); it != fields.end()) node.owner_fields = it->second;
        if (auto it = declarations.find(key); it != declarations.end()) {
          node.deprecated = node.deprecated || it->second.deprecated;
          if (node.visibility == Visibility::public_api && node.container.size() > 0) node.visibility = it->second.access;
        }
      }
      const auto ret = classify_return_type(node.return_type);
      MethodDescriptor d;
      d.id = key;
      d.file = fp.path;
      d.span = node.body_span;
      d.return_category = ret.category;
      d.return_form = ret.form;
      d.return_type = ret.text;
      d.flags = structural_flags(node);
      d.visibility = node.visibility;
      d.name = node.name;
      d.qualified_name = qualified;
      d.arity = node.arity();
      d.is_constexpr = node.is_constexpr;
      inv.methods.push_back(std::move(d));
    }
  }

  // disambiguate colliding ids deterministically
  std::map<std::string, int> counts;
  for (const auto& m : inv.methods) ++counts[m.id];
  std::map<std::string, int> seen;
  for (auto& m : inv.methods) {
    if (counts[m.id] < 2) continue;
    std::string with_file = m.id + "@" + m.file;
    const int n = seen[with_file]++;
    m.id = n == 0 ? with_file : with_file + "#" + std::to_string(n + 1);
  }
  return inv;
}

std::string render_variant_body(const MethodDescriptor& m, const TransformationSpec& spec) {
  if (spec.kind == TransformationKind::strip_body) return "{}";
  switch (*spec.constant_tag) {
    case ConstantTag::true_val: return "{ return true; }";
    case ConstantTag::false_val: return "{ return false; }";
    case ConstantTag::int_zero: return "{ return 0; }";
    case ConstantTag::int_one: return "{ return 1; }";
    case ConstantTag::float_zero: return "{ return 0.0; }";
    case ConstantTag::float_tenth: return "{ return 0.1; }";
    case ConstantTag::char_space: return "{ return ' '; }";
    case ConstantTag::char_A: return "{ return 'A'; }";
    case ConstantTag::string_empty: return "{ return \"\"; }";
    case ConstantTag::string_A: return "{ return \"A\"; }";
    case ConstantTag::empty_sequence: return "{ return {}; }";
    case ConstantTag::null_ref:
      if (m.return_form == ReturnForm::pointer) return "{ return nullptr; }";
      if (m.return_form == ReturnForm::reference)
        return "{ static " + normalize_type_for_static(m.return_type) +
               " pseudotest_neutral{}; return pseudotest_neutral; }";
      return "{ return {}; }";
  }
  return "{}";
}

SourcePatch synthesize_variant(const MethodInventory& inventory, std::string_view method_id,
                               const TransformationSpec& spec) {
  const auto& m = inventory.at(method_id);
  if (!admissible(spec, m.return_category))
    throw ContractViolation("precondition violation: " + spec.name() + " is not admissible for " +
                            std::string(to_string(m.return_category)) + " method " + m.id);
  const auto it = inventory.file_digests.find(m.file);
  const std::string current = read_file(inventory.project_root / m.file);
  if (it == inventory.file_digests.end() || content_digest(current) != it->second)
    throw StaleInventoryError(m.file + " changed since discovery; rediscover before synthesizing variants");

  SourcePatch p;
  p.file = m.file;
  p.span = m.span;
  p.replacement = render_variant_body(m, spec);
  p.method_id = m.id;
  p.transformation = spec;
  p.label = spec.name();
  p.file_digest = it->second;
  return p;
}

std::optional<std::vector<JUnitCase>> parse_junit_report(std::string_view xml) {
  if (xml.find("<testsuites") == std::string_view::npos) return std::nullopt;
  if (xml.find("</testsuites>") == std::string_view::npos) return std::nullopt;
  std::vector<JUnitCase> cases;
  std::size_t pos = 0;
  while ((pos = xml.find("<testcase", pos)) != std::string_view::npos) {
    const auto tag_end = xml.find('>', pos);
    if (tag_end == std::string_view::npos) return std::nullopt;
    const auto tag = xml.substr(pos, tag_end - pos + 1);
    JUnitCase c;
    c.name = xml_attribute(tag, "name").value_or("");
    if (auto t = xml_attribute(tag, "time")) c.seconds = std::strtod(t->c_str(), nullptr);
    std::size_t next = tag_end + 1;
    if (tag.size() < 2 || tag[tag.size() - 2] != '/') {
      const auto close = xml.find("</testcase>", tag_end);
      if (close == std::string_view::npos) return std::nullopt;
      const auto inner = xml.substr(tag_end + 1, close - tag_end - 1);
      for (std::size_t f = 0; (f = inner.find("<failure", f)) != std::string_view::npos; ++f) ++c.failures;
      for (std::size_t f = 0; (f = inner.find("<error", f)) != std::string_view::npos; ++f) ++c.errors;
      next = close;
    }
    cases.push_back(std::move(c));
    pos = next;
  }
  return cases;
}

SuiteOutcome execute_suite(const fs::path& workspace, const std::optional<std::set<std::string>>& selection,
                           Millis budget, const ExecutionOptions& options) {
  if (!fs::is_directory(workspace) || !is_project(workspace))
    throw EnvironmentError("workspace missing or corrupt: " + workspace.string());
  const auto env = build_env(options);
  const auto meta = workspace / ".pseudotest";
  fs::create_directories(meta);

  SuiteOutcome outcome;
  if (!options.skip_build) {
    ProcessRequest build;
    build.argv = {"/bin/sh", "-c", options.toolchain.build_command};
    build.cwd = workspace;
    build.env_set = env;
    build.env_unset = kUnsetForChildren;
    build.budget = options.toolchain.build_budget;
    build.output_file = meta / "build.log";
    const auto r = run_process(build);
    outcome.build_time = r.elapsed;
    if (!r.succeeded()) {
      outcome.status = SuiteStatus::compile_error;
      outcome.log_excerpt = read_tail(build.output_file, 2048);
      return outcome;
    }
  }

  if (selection && selection->empty()) return outcome;  // nothing to run

  const auto report = meta / "junit.xml";
  std::error_code ec;
  fs::remove(report, ec);
  ProcessRequest run;
  run.argv = {(workspace / options.toolchain.test_binary).string(), "--reporters=junit", "--out=" + report.string(),
              "--no-colors=true", "--case-sensitive=true"};
  if (selection) {
    std::string filter;
    for (const auto& t : *selection) filter += (filter.empty() ? "" : ",") + escape_filter(t);
    run.argv.push_back("--test-case=" + filter);
  }
  run.cwd = workspace;
  run.env_set = env;
  run.env_unset = kUnsetForChildren;
  run.budget = budget;
  run.output_file = meta / "test.log";
  const auto r = run_process(run);
  outcome.wall_time = r.elapsed;
  const std::string log_tail = read_tail(run.output_file, 2048);

  if (r.end == ProcessResult::End::timed_out) {
    outcome.status = SuiteStatus::timeout;
    outcome.log_excerpt = "timeout after " + std::to_string(budget.count()) + " ms\n" + log_tail;
    return outcome;
  }
  if (r.end == ProcessResult::End::signaled) {
    outcome.status = SuiteStatus::crashed;
    outcome.log_excerpt = "terminated by signal " + std::to_string(r.signal) + "\n" + log_tail;
    return outcome;
  }

  std::optional<std::vector<JUnitCase>> cases;
  if (fs::exists(report)) cases = parse_junit_report(read_file(report));
  if (!cases) {
    outcome.status = SuiteStatus::crashed;
    outcome.log_excerpt = "no test report (exit code " + std::to_string(r.exit_code) + ")\n" + log_tail;
    return outcome;
  }

  bool saw_assert = false, saw_exception = false;
  std::set<std::string> failing;
  std::string summary;
  for (const auto& c : *cases) {
    outcome.test_times[c.name] = std::max(outcome.test_times[c.name], Micros(static_cast<long long>(c.seconds * 1e6)));
    if (c.failures > 0 || c.errors > 0) {
      failing.insert(c.name);
      saw_assert = saw_assert || c.failures > 0;
      saw_exception = saw_exception || c.errors > 0;
      summary += (c.errors > 0 ? "exception: " : "assertion: ") + c.name + "\n";
    }
  }
  outcome.test_count = static_cast<int>(outcome.test_times.size());
  outcome.failing_tests.assign(failing.begin(), failing.end());
  if (saw_assert && saw_exception) outcome.failure_kind = FailureKind::mixed;
  else if (saw_exception) outcome.failure_kind = FailureKind::exception;
  else if (saw_assert) outcome.failure_kind = FailureKind::assertion;

  if (!failing.empty()) {
    outcome.status = SuiteStatus::failures;
    outcome.log_excerpt = summary;
  } else if (r.exit_code != 0) {
    outcome.status = SuiteStatus::crashed;
    outcome.log_excerpt = "exit code " + std::to_string(r.exit_code) + " without failing tests\n" + log_tail;
  }
  return outcome;
}

Baseline verify_baseline_in(const fs::path& workspace, Millis budget, const ExecutionOptions& options) {
  const auto first = execute_suite(workspace, std::nullopt, budget, options);
  if (first.status == SuiteStatus::compile_error)
    throw BaselineError("baseline does not build:\n" + first.log_excerpt, {}, false);
  ExecutionOptions again = options;
  again.skip_build = true;
  const auto second = execute_suite(workspace, std::nullopt, budget, again);

  std::set<std::string> union_failing(first.failing_tests.begin(), first.failing_tests.end());
  union_failing.insert(second.failing_tests.begin(), second.failing_tests.end());
  std::vector<std::string> failing(union_failing.begin(), union_failing.end());

  if (first.status != second.status || first.failing_tests != second.failing_tests) {
    std::string which;
    for (const auto& t : failing) which += " " + t;
    throw BaselineError("flaky baseline: two runs disagree (" + std::string(to_string(first.status)) + " vs " +
                            std::string(to_string(second.status)) + ");" + which,
                        failing, true);
  }
  if (second.status != SuiteStatus::all_passed) {
    std::string which;
    for (const auto& t : failing) which += " " + t;
    throw BaselineError("baseline is red (" + std::string(to_string(second.status)) + "):" + which +
                            (failing.empty() ? "\n" + second.log_excerpt : ""),
                        failing, false);
  }
  if (second.test_count == 0) throw BaselineError("baseline runs no tests", {}, false);

  Baseline b;
  b.suite_green = true;
  b.test_count = second.test_count;
  b.nominal_suite_time = second.wall_time;
  b.per_test_times = second.test_times;
  return b;
}

Baseline verify_baseline(const fs::path& project_root, Millis budget, const ExecutionOptions& options) {
  if (!is_project(project_root)) throw NotAProjectError(project_root.string() + " has no Makefile");
  auto ws = Workspace::copy_of(project_root, false, "baseline");
  return verify_baseline_in(ws.root(), budget, options);
}

}  // namespace pseudotest
