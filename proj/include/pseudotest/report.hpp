#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pseudotest/analysis_report.hpp"

namespace pseudotest {

enum class ReportFormat { json, markdown, html };

std::string_view to_string(ReportFormat);
ReportFormat report_format_from_string(std::string_view);

struct EmitOptions {
  /// Wall-clock data (timings object, per-variant durations) varies between
  /// identical runs; leave it out for byte-comparable reports.
  bool include_timings = true;
};

nlohmann::json report_to_json(const AnalysisReport& report, const EmitOptions& options = {});

/// Inverse of report_to_json. Throws ContractViolation on malformed input.
AnalysisReport report_from_json(const nlohmann::json& doc);

/// Structural check against schema version 1. Throws InternalError.
void validate_report_json(const nlohmann::json& doc);

std::string render_json(const AnalysisReport& report, const EmitOptions& options = {});
std::string render_markdown(const AnalysisReport& report, const EmitOptions& options = {});
std::string render_html(const AnalysisReport& report, const EmitOptions& options = {});

/// Writes report.json / report.md / report.html under `output_dir`.
/// Throws IoError when the directory or file cannot be written.
std::vector<std::filesystem::path> emit_report(const AnalysisReport& report, ReportFormat format,
                                               const std::filesystem::path& output_dir,
                                               const EmitOptions& options = {});

}  // namespace pseudotest
