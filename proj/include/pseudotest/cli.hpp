#pragma once

#include <iosfwd>

namespace pseudotest {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_baseline = 3, exit_analysis = 4 };

/// `analyze` runs the pipeline and writes reports; `variants` prints one JSON
/// line per extreme-variant patch of every discovered method.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pseudotest
