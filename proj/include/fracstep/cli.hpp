#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracstep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolverFailure = 3;

/// Runs one subcommand. `args` excludes the program name. Data goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracstep
