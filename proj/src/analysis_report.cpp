#include "pseudotest/analysis_report.hpp"

#include "pseudotest/errors.hpp"

namespace pseudotest {
namespace {

constexpr std::string_view kDetectionNames[] = {"undetected", "detected_failure", "detected_timeout",
                                                "detected_crash", "compile_error"};
constexpr std::string_view kOperatorNames[] = {"negate_conditional", "conditional_boundary",
                                               "arithmetic_replacement", "increment_flip",
                                               "return_value_mutation", "remove_call"};

}  // namespace

std::string_view to_string(Detection d) { return kDetectionNames[static_cast<int>(d)]; }

Detection detection_from_string(std::string_view s) {
  for (int i = 0; i < 5; ++i)
    if (kDetectionNames[i] == s) return static_cast<Detection>(i);
  throw ContractViolation("unknown detection '" + std::string(s) + "'");
}

Detection detection_for(SuiteStatus status) {
  switch (status) {
    case SuiteStatus::all_passed: return Detection::undetected;
    case SuiteStatus::failures: return Detection::detected_failure;
    case SuiteStatus::timeout: return Detection::detected_timeout;
    case SuiteStatus::crashed: return Detection::detected_crash;
    case SuiteStatus::compile_error: return Detection::compile_error;
  }
  return Detection::detected_crash;
}

std::string_view to_string(MutationOperator op) { return kOperatorNames[static_cast<int>(op)]; }

MutationOperator mutation_operator_from_string(std::string_view s) {
  for (int i = 0; i < 6; ++i)
    if (kOperatorNames[i] == s) return static_cast<MutationOperator>(i);
  throw ContractViolation("unknown mutation operator '" + std::string(s) + "'");
}

std::vector<std::string> AnalysisReport::ids_with(ClassificationLabel label) const {
  std::vector<std::string> out;
  for (const auto& [id, m] : methods)
    if (m.classification.label == label) out.push_back(id);
  return out;
}

}  // namespace pseudotest
