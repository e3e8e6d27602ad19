#include "pseudotest/report.hpp"

#include <fstream>
#include <sstream>

#include "pseudotest/errors.hpp"
#include "pseudotest/metrics_stats.hpp"

namespace pseudotest {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional_number(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string project_name(const AnalysisReport& r) {
  auto p = fs::path(r.config.project_root).lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().string();
}

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : std::string(sep)) + s;
  return out;
}

std::size_t count_detected(const MethodReport& m) {
  std::size_t n = 0;
  for (const auto& v : m.variants) n += is_detected(v.detection);
  return n;
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw InternalError("report failed schema self-check: " + what);
}

void expect_keys(const json& obj, std::initializer_list<std::pair<const char*, json::value_t>> keys,
                 const std::string& where) {
  expect(obj.is_object(), where + " is not an object");
  for (const auto& [key, type] : keys) {
    expect(obj.contains(key), where + " lacks '" + key + "'");
    const auto& v = obj.at(key);
    const bool number_ok = type == json::value_t::number_float && v.is_number();
    const bool nullable = type == json::value_t::null;  // number or null
    expect(v.type() == type || number_ok || (nullable && (v.is_null() || v.is_number())) ||
               (type == json::value_t::number_unsigned && v.is_number_integer()),
           where + "." + key + " has the wrong type");
  }
}

}  // namespace

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::json: return "json";
    case ReportFormat::markdown: return "markdown";
    case ReportFormat::html: return "html";
  }
  return "?";
}

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  if (s == "html") return ReportFormat::html;
  throw ContractViolation("unknown report format '" + std::string(s) + "'");
}

json report_to_json(const AnalysisReport& r, const EmitOptions& options) {
  json doc;
  doc["schema_version"] = r.schema_version;
  doc["config"] = {{"project_root", r.config.project_root},
                   {"timeout_factor", r.config.timeout_factor},
                   {"timeout_constant_s", r.config.timeout_constant_s},
                   {"full_suite_mode", r.config.full_suite_mode},
                   {"fast_mode", r.config.fast_mode},
                   {"with_mutation_baseline", r.config.with_mutation_baseline},
                   {"include", r.config.include},
                   {"exclude", r.config.exclude}};
  doc["inventory"] = {{"n_methods", r.inventory_size}, {"source_digest", r.source_digest}};
  doc["coverage"] = {{"covered", r.coverage.covered}, {"probe_log_digest", r.coverage.probe_log_digest}};
  const auto& m = r.metrics;
  doc["summary"] = {{"n_methods", m.n_methods}, {"n_covered", m.n_covered},        {"c_rate", optional_number(m.c_rate)},
                    {"n_mua", m.n_mua},         {"n_pseudo", m.n_pseudo},          {"ps_rate", optional_number(m.ps_rate)},
                    {"ms_pseudo", optional_number(m.ms_pseudo)}, {"ms_req", optional_number(m.ms_req)}};

  json methods = json::array();
  for (const auto& [id, mr] : r.methods) {
    json entry = {{"id", mr.id},
                  {"file", mr.file},
                  {"return_category", to_string(mr.return_category)},
                  {"visibility", to_string(mr.visibility)},
                  {"classification", to_string(mr.classification.label)},
                  {"covering_tests", mr.covering_tests}};
    if (mr.classification.reason) entry["classification_reason"] = *mr.classification.reason;
    if (mr.inclusion.exclusion_reason) entry["exclusion_reason"] = to_string(*mr.inclusion.exclusion_reason);
    json variants = json::array();
    for (const auto& v : mr.variants) {
      json jv = {{"transformation", v.spec.name()},
                 {"detection", to_string(v.detection)},
                 {"failing_tests", v.failing_tests},
                 {"failure_kind", to_string(v.failure_kind)},
                 {"flaky", v.flaky}};
      if (options.include_timings) jv["duration_ms"] = v.duration.count();
      variants.push_back(std::move(jv));
    }
    entry["variants"] = std::move(variants);
    json mutants = json::array();
    for (const auto& mu : mr.mutants) {
      mutants.push_back({{"operator", to_string(mu.mutant.mutation_operator)},
                         {"site", {mu.mutant.site.begin, mu.mutant.site.end}},
                         {"replacement", mu.mutant.replacement},
                         {"detection", to_string(mu.detection)},
                         {"failure_kind", to_string(mu.failure_kind)}});
    }
    entry["mutants"] = std::move(mutants);
    if (mr.mutation_score) entry["mutation_score"] = *mr.mutation_score;
    methods.push_back(std::move(entry));
  }
  doc["methods"] = std::move(methods);
  doc["pseudo_tested"] = r.ids_with(ClassificationLabel::pseudo_tested);
  doc["required"] = r.ids_with(ClassificationLabel::required);
  doc["warnings"] = r.warnings;
  if (r.cache_check) {
    doc["cache_check"] = {{"method_id", r.cache_check->method_id},
                          {"transformation", r.cache_check->transformation},
                          {"cached", to_string(r.cache_check->cached)},
                          {"rebuilt", to_string(r.cache_check->rebuilt)},
                          {"agreed", r.cache_check->agreed()}};
  } else {
    doc["cache_check"] = nullptr;
  }
  if (options.include_timings) {
    const auto& t = r.timings;
    doc["timings"] = {{"baseline_ms", t.baseline.count()}, {"coverage_ms", t.coverage.count()},
                      {"variants_ms", t.variants.count()}, {"mutants_ms", t.mutants.count()},
                      {"total_ms", t.total.count()},       {"test_budget_ms", t.test_budget.count()}};
  }
  return doc;
}

void validate_report_json(const json& doc) {
  using vt = json::value_t;
  expect_keys(doc,
              {{"schema_version", vt::number_unsigned},
               {"config", vt::object},
               {"inventory", vt::object},
               {"coverage", vt::object},
               {"summary", vt::object},
               {"methods", vt::array},
               {"pseudo_tested", vt::array},
               {"required", vt::array},
               {"warnings", vt::array}},
              "report");
  expect(doc.at("schema_version") == 1, "schema_version must be 1");
  expect_keys(doc.at("config"),
              {{"project_root", vt::string},
               {"timeout_factor", vt::number_float},
               {"full_suite_mode", vt::boolean},
               {"fast_mode", vt::boolean},
               {"with_mutation_baseline", vt::boolean},
               {"include", vt::array},
               {"exclude", vt::array}},
              "config");
  expect_keys(doc.at("summary"),
              {{"n_methods", vt::number_unsigned},
               {"n_covered", vt::number_unsigned},
               {"c_rate", vt::null},
               {"n_mua", vt::number_unsigned},
               {"n_pseudo", vt::number_unsigned},
               {"ps_rate", vt::null},
               {"ms_pseudo", vt::null},
               {"ms_req", vt::null}},
              "summary");
  std::string previous;
  for (const auto& m : doc.at("methods")) {
    expect_keys(m,
                {{"id", vt::string},
                 {"classification", vt::string},
                 {"covering_tests", vt::array},
                 {"variants", vt::array}},
                "method");
    const auto id = m.at("id").get<std::string>();
    expect(previous.empty() || previous < id, "methods not sorted by id at " + id);
    previous = id;
    const auto label = m.at("classification").get<std::string>();
    expect(label == "pseudo_tested" || label == "required" || label == "not_covered" || label == "excluded" ||
               label == "unassessable",
           "unknown classification " + label);
    expect((label == "excluded" || label == "not_covered") == m.contains("exclusion_reason"),
           id + ": exclusion_reason must be present exactly for excluded and not covered methods");
    for (const auto& v : m.at("variants")) {
      expect_keys(v, {{"transformation", vt::string}, {"detection", vt::string}, {"failing_tests", vt::array}},
                  id + " variant");
    }
  }
  if (doc.contains("timings")) expect(doc.at("timings").is_object(), "timings is not an object");
}

AnalysisReport report_from_json(const json& doc) {
  try {
    AnalysisReport r;
    r.schema_version = doc.at("schema_version").get<int>();
    const auto& c = doc.at("config");
    r.config.project_root = c.at("project_root").get<std::string>();
    r.config.timeout_factor = c.at("timeout_factor").get<double>();
    r.config.timeout_constant_s = c.at("timeout_constant_s").get<double>();
    r.config.full_suite_mode = c.at("full_suite_mode").get<bool>();
    r.config.fast_mode = c.at("fast_mode").get<bool>();
    r.config.with_mutation_baseline = c.at("with_mutation_baseline").get<bool>();
    r.config.include = c.at("include").get<std::vector<std::string>>();
    r.config.exclude = c.at("exclude").get<std::vector<std::string>>();
    r.inventory_size = doc.at("inventory").at("n_methods").get<std::size_t>();
    r.source_digest = doc.at("inventory").at("source_digest").get<std::string>();
    r.coverage.covered = doc.at("coverage").at("covered").get<std::set<std::string>>();
    r.coverage.probe_log_digest = doc.at("coverage").at("probe_log_digest").get<std::string>();

    const auto& s = doc.at("summary");
    r.metrics.n_methods = s.at("n_methods").get<std::size_t>();
    r.metrics.n_covered = s.at("n_covered").get<std::size_t>();
    r.metrics.c_rate = read_optional_number(s.at("c_rate"));
    r.metrics.n_mua = s.at("n_mua").get<std::size_t>();
    r.metrics.n_pseudo = s.at("n_pseudo").get<std::size_t>();
    r.metrics.ps_rate = read_optional_number(s.at("ps_rate"));
    r.metrics.ms_pseudo = read_optional_number(s.at("ms_pseudo"));
    r.metrics.ms_req = read_optional_number(s.at("ms_req"));

    for (const auto& jm : doc.at("methods")) {
      MethodReport m;
      m.id = jm.at("id").get<std::string>();
      m.file = jm.at("file").get<std::string>();
      m.return_category = return_category_from_string(jm.at("return_category").get<std::string>());
      m.visibility = visibility_from_string(jm.at("visibility").get<std::string>());
      m.classification.label = classification_label_from_string(jm.at("classification").get<std::string>());
      if (jm.contains("classification_reason"))
        m.classification.reason = jm.at("classification_reason").get<std::string>();
      if (jm.contains("exclusion_reason"))
        m.inclusion = InclusionDecision::exclude(exclusion_reason_from_string(jm.at("exclusion_reason").get<std::string>()));
      m.covering_tests = jm.at("covering_tests").get<std::vector<std::string>>();
      for (const auto& jv : jm.at("variants")) {
        VariantOutcome v;
        v.method_id = m.id;
        v.spec = TransformationSpec::from_name(jv.at("transformation").get<std::string>());
        v.detection = detection_from_string(jv.at("detection").get<std::string>());
        v.failing_tests = jv.at("failing_tests").get<std::vector<std::string>>();
        v.failure_kind = failure_kind_from_string(jv.at("failure_kind").get<std::string>());
        v.flaky = jv.at("flaky").get<bool>();
        if (jv.contains("duration_ms")) v.duration = Millis(jv.at("duration_ms").get<long long>());
        m.variants.push_back(std::move(v));
      }
      for (const auto& ju : jm.at("mutants")) {
        MutantOutcome o;
        o.mutant.method_id = m.id;
        o.mutant.mutation_operator = mutation_operator_from_string(ju.at("operator").get<std::string>());
        o.mutant.site = {ju.at("site").at(0).get<std::size_t>(), ju.at("site").at(1).get<std::size_t>()};
        o.mutant.replacement = ju.at("replacement").get<std::string>();
        o.detection = detection_from_string(ju.at("detection").get<std::string>());
        o.failure_kind = failure_kind_from_string(ju.at("failure_kind").get<std::string>());
        m.mutants.push_back(std::move(o));
      }
      if (jm.contains("mutation_score")) m.mutation_score = jm.at("mutation_score").get<double>();
      if (r.coverage.covered.count(m.id))
        r.coverage.covering_tests[m.id] = std::set<std::string>(m.covering_tests.begin(), m.covering_tests.end());
      r.methods.emplace(m.id, std::move(m));
    }
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    if (const auto& cc = doc.at("cache_check"); !cc.is_null()) {
      r.cache_check = CacheCheck{cc.at("method_id").get<std::string>(), cc.at("transformation").get<std::string>(),
                                 detection_from_string(cc.at("cached").get<std::string>()),
                                 detection_from_string(cc.at("rebuilt").get<std::string>())};
    }
    if (doc.contains("timings")) {
      const auto& t = doc.at("timings");
      r.timings.baseline = Millis(t.at("baseline_ms").get<long long>());
      r.timings.coverage = Millis(t.at("coverage_ms").get<long long>());
      r.timings.variants = Millis(t.at("variants_ms").get<long long>());
      r.timings.mutants = Millis(t.at("mutants_ms").get<long long>());
      r.timings.total = Millis(t.at("total_ms").get<long long>());
      r.timings.test_budget = Millis(t.at("test_budget_ms").get<long long>());
    }
    return r;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("malformed report document: ") + e.what());
  }
}

std::string render_json(const AnalysisReport& report, const EmitOptions& options) {
  const auto doc = report_to_json(report, options);
  validate_report_json(doc);
  return doc.dump(2) + "\n";
}

std::string render_markdown(const AnalysisReport& r, const EmitOptions& options) {
  const auto& m = r.metrics;
  std::ostringstream out;
  out << "# Pseudo-tested methods: " << project_name(r) << "\n\n";
  out << "| #Methods | #Covered | C_RATE | #MUA | #PSEUDO | PS_RATE | MS_pseudo | MS_req |\n";
  out << "|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  out << "| " << m.n_methods << " | " << m.n_covered << " | " << render_percent(m.c_rate) << " | " << m.n_mua << " | "
      << m.n_pseudo << " | " << render_percent(m.ps_rate) << " | " << render_percent(m.ms_pseudo, 1) << " | "
      << render_percent(m.ms_req, 1) << " |\n";

  const auto pseudo = r.ids_with(ClassificationLabel::pseudo_tested);
  if (!pseudo.empty()) {
    out << "\n## Pseudo-tested methods\n\n";
    for (const auto& id : pseudo) {
      const auto& mr = r.methods.at(id);
      std::vector<std::string> names;
      for (const auto& v : mr.variants) names.push_back(v.spec.name());
      out << "- `" << id << "` in `" << mr.file << "`, variants " << join(names, ", ") << ", covered by "
          << join(mr.covering_tests, "; ") << "\n";
    }
  }

  out << "\n## Methods under analysis\n\n";
  out << "| Method | Classification | Detected variants | Covering tests | Mutation score |\n";
  out << "|---|---|---:|---|---:|\n";
  for (const auto& [id, mr] : r.methods) {
    if (!mr.inclusion.included) continue;
    out << "| `" << md_escape(id) << "` | " << to_string(mr.classification.label) << " | " << count_detected(mr) << "/"
        << mr.variants.size() << " | " << md_escape(join(mr.covering_tests, "; ")) << " | "
        << render_percent(mr.mutation_score, 1) << " |\n";
  }

  if (!r.warnings.empty()) {
    out << "\n## Warnings\n\n";
    for (const auto& w : r.warnings) out << "- " << w << "\n";
  }
  if (options.include_timings) {
    out << "\nTotal time " << r.timings.total.count() << " ms, per-variant budget " << r.timings.test_budget.count()
        << " ms.\n";
  }
  return out.str();
}

std::string render_html(const AnalysisReport& r, const EmitOptions& options) {
  const auto& m = r.metrics;
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>Pseudo-tested methods: "
      << html_escape(project_name(r)) << "</title>\n<style>\n"
      << "body{font-family:sans-serif;margin:2em;color:#222}\n"
      << "table{border-collapse:collapse;margin:1em 0}\n"
      << "th,td{border:1px solid #bbb;padding:4px 8px;text-align:left}\n"
      << "td.num{text-align:right}\n"
      << "tr.pseudo_tested td{background:#fde2e1}\n"
      << "code{font-size:90%}\n"
      << "</style>\n</head>\n<body>\n";
  out << "<h1>Pseudo-tested methods: " << html_escape(project_name(r)) << "</h1>\n";
  out << "<table id=\"summary\">\n<tr><th>#Methods</th><th>#Covered</th><th>C_RATE</th><th>#MUA</th>"
      << "<th>#PSEUDO</th><th>PS_RATE</th><th>MS_pseudo</th><th>MS_req</th></tr>\n";
  out << "<tr><td class=\"num\">" << m.n_methods << "</td><td class=\"num\">" << m.n_covered
      << "</td><td class=\"num\">" << render_percent(m.c_rate) << "</td><td class=\"num\">" << m.n_mua
      << "</td><td class=\"num\">" << m.n_pseudo << "</td><td class=\"num\">" << render_percent(m.ps_rate)
      << "</td><td class=\"num\" id=\"ms-pseudo\">" << render_percent(m.ms_pseudo, 1)
      << "</td><td class=\"num\" id=\"ms-req\">" << render_percent(m.ms_req, 1) << "</td></tr>\n</table>\n";

  const auto pseudo = r.ids_with(ClassificationLabel::pseudo_tested);
  if (!pseudo.empty()) {
    out << "<h2>Pseudo-tested methods</h2>\n<ul>\n";
    for (const auto& id : pseudo)
      out << "<li><code>" << html_escape(id) << "</code> covered by "
          << html_escape(join(r.methods.at(id).covering_tests, "; ")) << "</li>\n";
    out << "</ul>\n";
  }

  out << "<h2>All methods</h2>\n<table id=\"methods\">\n<tr><th>Method</th><th>File</th><th>Classification</th>"
      << "<th>Variants</th><th>Mutation score</th></tr>\n";
  for (const auto& [id, mr] : r.methods) {
    std::string variants;
    for (const auto& v : mr.variants)
      variants += (variants.empty() ? "" : ", ") + v.spec.name() + ": " + std::string(to_string(v.detection));
    std::string label(to_string(mr.classification.label));
    if (mr.inclusion.exclusion_reason && mr.classification.label == ClassificationLabel::excluded)
      label += " (" + std::string(to_string(*mr.inclusion.exclusion_reason)) + ")";
    out << "<tr class=\"" << to_string(mr.classification.label) << "\"><td><code>" << html_escape(id)
        << "</code></td><td>" << html_escape(mr.file) << "</td><td>" << html_escape(label) << "</td><td>"
        << html_escape(variants) << "</td><td class=\"num\">" << render_percent(mr.mutation_score, 1)
        << "</td></tr>\n";
  }
  out << "</table>\n";
  if (!r.warnings.empty()) {
    out << "<h2>Warnings</h2>\n<ul>\n";
    for (const auto& w : r.warnings) out << "<li>" << html_escape(w) << "</li>\n";
    out << "</ul>\n";
  }
  if (options.include_timings)
    out << "<p>Total time " << r.timings.total.count() << " ms.</p>\n";
  out << "</body>\n</html>\n";
  return out.str();
}

std::vector<fs::path> emit_report(const AnalysisReport& report, ReportFormat format, const fs::path& output_dir,
                                  const EmitOptions& options) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec || !fs::is_directory(output_dir))
    throw IoError("cannot create output directory " + output_dir.string() + ": " + ec.message());

  std::string text;
  fs::path path;
  switch (format) {
    case ReportFormat::json:
      text = render_json(report, options);
      path = output_dir / "report.json";
      break;
    case ReportFormat::markdown:
      text = render_markdown(report, options);
      path = output_dir / "report.md";
      break;
    case ReportFormat::html:
      text = render_html(report, options);
      path = output_dir / "report.html";
      break;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("short write to " + path.string());
  return {path};
}

}  // namespace pseudotest
