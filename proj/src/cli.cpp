#include "pseudotest/cli.hpp"

#include <CLI11.hpp>
#include <iostream>

#include "pseudotest/errors.hpp"
#include "pseudotest/extreme_engine.hpp"
#include "pseudotest/metrics_stats.hpp"
#include "pseudotest/report.hpp"

namespace pseudotest {
namespace {

struct RunConfig {
  std::string project_root;
  std::string output_dir = "pseudotest-report";
  std::vector<std::string> formats;
  int jobs = 1;
  double timeout_factor = 2.0;
  double timeout_constant_s = 4.0;
  bool full_suite_mode = false;
  bool fast_mode = false;
  bool with_mutation_baseline = false;
  bool no_timings = false;
  bool quiet = false;
  std::vector<std::string> include;
  std::vector<std::string> exclude;
};

std::string summary_line(const AnalysisReport& r) {
  const auto& m = r.metrics;
  return "methods: " + std::to_string(m.n_methods) + ", covered: " + std::to_string(m.n_covered) +
         ", under analysis: " + std::to_string(m.n_mua) + ", pseudo-tested: " + std::to_string(m.n_pseudo) +
         ", required: " + std::to_string(r.ids_with(ClassificationLabel::required).size()) +
         ", PS_RATE: " + render_percent(m.ps_rate);
}

int do_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<ReportFormat> formats;
  for (const auto& f : cfg.formats.empty() ? std::vector<std::string>{"json"} : cfg.formats)
    formats.push_back(report_format_from_string(f));

  EngineConfig engine;
  engine.report.project_root = cfg.project_root;
  engine.report.timeout_factor = cfg.timeout_factor;
  engine.report.timeout_constant_s = cfg.timeout_constant_s;
  engine.report.full_suite_mode = cfg.full_suite_mode;
  engine.report.fast_mode = cfg.fast_mode;
  engine.report.with_mutation_baseline = cfg.with_mutation_baseline;
  engine.report.include = cfg.include;
  engine.report.exclude = cfg.exclude;
  engine.jobs = cfg.jobs;
  if (!cfg.quiet) engine.progress = [&err](std::string_view msg) { err << "pseudotest: " << msg << "\n"; };

  MakefileDoctestAdapter adapter;
  const auto report = analyze(adapter, cfg.project_root, engine);
  EmitOptions emit;
  emit.include_timings = !cfg.no_timings;
  for (auto f : formats)
    for (const auto& p : emit_report(report, f, cfg.output_dir, emit))
      if (!cfg.quiet) err << "pseudotest: wrote " << p.string() << "\n";
  for (const auto& w : report.warnings) err << "pseudotest: warning: " << w << "\n";
  out << summary_line(report) << "\n";
  return exit_ok;
}

int do_variants(const std::string& project, std::ostream& out) {
  const auto inventory = discover(project);
  for (const auto& m : inventory.methods) {
    for (const auto& spec : transformations_for(m.return_category)) {
      const auto p = synthesize_variant(inventory, m.id, spec);
      nlohmann::json line = {{"method_id", p.method_id}, {"transformation", p.label}, {"file", p.file},
                             {"begin", p.span.begin},    {"end", p.span.end},         {"replacement", p.replacement}};
      out << line.dump() << "\n";
    }
  }
  return exit_ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detects pseudo-tested methods with extreme transformations", "pseudotest"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* analyze_cmd = app.add_subcommand("analyze", "Classify every method of a project");
  analyze_cmd->add_option("--project", cfg.project_root, "Project root (contains the Makefile)")->required();
  analyze_cmd->add_option("--out", cfg.output_dir, "Report directory")->capture_default_str();
  analyze_cmd->add_option("--format", cfg.formats, "json, markdown or html; repeatable")
      ->check(CLI::IsMember({"json", "markdown", "md", "html"}))
      ->take_all();
  analyze_cmd->add_option("--jobs", cfg.jobs, "Parallel suite runs")->check(CLI::PositiveNumber)->capture_default_str();
  analyze_cmd->add_option("--timeout-factor", cfg.timeout_factor, "Multiplier on the slowest baseline test")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze_cmd->add_option("--timeout-constant", cfg.timeout_constant_s, "Seconds added to every budget")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  analyze_cmd->add_flag("--full-suite", cfg.full_suite_mode, "Run every test for every variant");
  analyze_cmd->add_flag("--fast", cfg.fast_mode, "Stop at the first detected variant of each method");
  analyze_cmd->add_flag("--with-mutation-baseline", cfg.with_mutation_baseline,
                        "Also run conventional mutants on assessed methods");
  analyze_cmd->add_option("--include", cfg.include, "Only analyze method ids matching these globs");
  analyze_cmd->add_option("--exclude", cfg.exclude, "Skip method ids matching these globs");
  analyze_cmd->add_flag("--no-timings", cfg.no_timings, "Leave wall-clock data out of reports");
  analyze_cmd->add_flag("--quiet", cfg.quiet, "No progress messages");

  std::string variants_project;
  auto* variants_cmd = app.add_subcommand("variants", "Print the extreme-variant patches of a project as JSON lines");
  variants_cmd->add_option("--project", variants_project, "Project root")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    if (rc != 0) err << app.help();
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*variants_cmd) return do_variants(variants_project, out);
    return do_analyze(cfg, out, err);
  } catch (const BaselineError& e) {
    err << "pseudotest: baseline failure: " << e.what() << "\n";
    for (const auto& t : e.failing_tests()) err << "pseudotest:   failing test: " << t << "\n";
    return exit_baseline;
  } catch (const std::exception& e) {
    err << "pseudotest: error: " << e.what() << "\n";
    return exit_analysis;
  }
}

}  // namespace pseudotest
