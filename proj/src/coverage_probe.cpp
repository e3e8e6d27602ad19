#include "pseudotest/coverage_probe.hpp"

#include <algorithm>
#include <cstdint>

#include "pseudotest/errors.hpp"
#include "pseudotest/source_syntax.hpp"

namespace pseudotest {
namespace {

std::string c_string_literal(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string encode_probe_record(std::string_view method_id, std::string_view test_id) {
  const auto len = static_cast<std::uint32_t>(method_id.size() + 1 + test_id.size());
  std::string out;
  for (int i = 0; i < 4; ++i) out += static_cast<char>((len >> (8 * i)) & 0xffu);
  out += method_id;
  out += kProbeSeparator;
  out += test_id;
  return out;
}

std::string probe_statement(const MethodDescriptor& m) {
  const std::string call = "::pseudotest_probe::hit(" + c_string_literal(m.id) + ");";
  if (m.is_constexpr) return " if (!__builtin_is_constant_evaluated()) " + call + " ";
  return " " + call + " ";
}

std::string instrument_source(std::string_view source, const std::vector<const MethodDescriptor*>& methods) {
  std::vector<const MethodDescriptor*> order = methods;
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->span.begin > b->span.begin; });
  std::string out(source);
  for (const auto* m : order) {
    if (m->span.end > out.size() || out[m->span.begin] != '{')
      throw InstrumentationError("cannot place probe in " + m->id + ": body span does not start at '{'");
    out.insert(m->span.begin + 1, probe_statement(*m));
  }
  return "#include \"" + std::string(kProbeHeader) + "\"\n" + out;
}

ProbedWorkspace instrument(const MethodInventory& inventory) {
  std::map<std::string, std::vector<const MethodDescriptor*>> by_file;
  for (const auto& m : inventory.methods) by_file[m.file].push_back(&m);

  ProbedWorkspace probed{Workspace::copy_of(inventory.project_root, false, "probe"), 0, {}};
  for (const auto& [file, expected] : inventory.file_digests) {
    if (content_digest(read_file(inventory.project_root / file)) != expected)
      throw StaleInventoryError(file + " changed since discovery");
  }
  for (const auto& [file, methods] : by_file) {
    const auto path = probed.workspace.root() / file;
    const std::string original = read_file(path);
    const std::string rewritten = instrument_source(original, methods);
    std::size_t functions_after = 0;
    try {
      functions_after = parse_source(rewritten).functions.size();
    } catch (const SyntaxError& e) {
      const std::size_t shift = rewritten.size() - original.size();
      std::string culprit = methods.front()->id;
      for (const auto* m : methods)
        if (m->span.begin <= e.offset() && e.offset() <= m->span.end + shift) culprit = m->id;
      throw InstrumentationError("probe injection broke " + file + " near method " + culprit + ": " + e.what());
    }
    if (functions_after != parse_source(original).functions.size())
      throw InstrumentationError("probe injection changed the function count of " + file + " (first method " +
                                 methods.front()->id + ")");
    write_file(path, rewritten);
    probed.probe_count += methods.size();
  }
  probed.log_path = probed.workspace.root() / ".pseudotest" / "probe.log";
  fs::create_directories(probed.log_path.parent_path());
  return probed;
}

CoverageMap covered_methods(std::string_view log) {
  std::set<std::pair<std::string, std::string>> records;
  std::size_t pos = 0;
  while (pos < log.size()) {
    if (log.size() - pos < 4) throw ProbeLogError("truncated record header", pos);
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(static_cast<unsigned char>(log[pos + i])) << (8 * i);
    if (len == 0) throw ProbeLogError("empty record", pos);
    if (log.size() - pos - 4 < len) throw ProbeLogError("truncated record payload", pos);
    const auto payload = log.substr(pos + 4, len);
    const auto sep = payload.find(kProbeSeparator);
    if (sep == std::string_view::npos || sep == 0) throw ProbeLogError("record without method id separator", pos);
    records.emplace(std::string(payload.substr(0, sep)), std::string(payload.substr(sep + 1)));
    pos += 4 + len;
  }

  CoverageMap map;
  std::string canonical;
  for (const auto& [method, test] : records) {
    map.covered.insert(method);
    auto& tests = map.covering_tests[method];
    if (!test.empty()) tests.insert(test);
    canonical += method + kProbeSeparator + test + '\n';
  }
  map.probe_log_digest = content_digest(canonical);
  return map;
}

void check_coverage_against(const CoverageMap& coverage, const MethodInventory& inventory) {
  for (const auto& id : coverage.covered)
    if (!inventory.find(id)) throw ContractViolation("probe log names unknown method '" + id + "'");
  for (const auto& [id, tests] : coverage.covering_tests)
    if (!coverage.covered.count(id)) throw ContractViolation("covering tests recorded for uncovered '" + id + "'");
}

}  // namespace pseudotest
