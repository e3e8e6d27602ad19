#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pseudotest/analysis_report.hpp"

namespace pseudotest {

struct MutationResult {
  std::map<MutantSpec, bool> per_mutant;  // compile errors left out
  std::map<std::string, std::optional<double>> per_method_score;
};

/// Every applicable site in the method body, ordered by site then operator.
/// `source` is the full text of the descriptor's file.
std::vector<MutantSpec> mutants_for(const MethodDescriptor& method, std::string_view source);

SourcePatch mutant_patch(const MethodInventory& inventory, const MutantSpec& mutant);

/// detected / total, absent for an empty list.
std::optional<double> method_mutation_score(const std::vector<bool>& detected);

/// Scores per method from mutant verdicts, compile errors excluded.
MutationResult summarize_mutants(const std::vector<MutantOutcome>& outcomes);

}  // namespace pseudotest
