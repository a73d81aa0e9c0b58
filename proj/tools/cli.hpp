#pragma once

#include <ostream>

namespace ewp {

/// Exit codes of the command-line tool.
constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand. Invalid flags or values give
/// kExitUsage, I/O and data errors give kExitRuntime.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ewp
