#pragma once

#include <string>
#include <vector>

namespace convergo::cli {

/// Runs the command-line surface.
/// Exit codes: 0 success (all cross-checks pass), 2 input error,
/// 3 theorem violation (a cross-check failed), 4 numerical degeneracy.
int run(int argc, const char* const* argv);

/// Same, with pre-split arguments (no program name).
int run(const std::vector<std::string>& args);

}  // namespace convergo::cli
