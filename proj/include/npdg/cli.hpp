#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace npdg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitUsage = 64;

/// Subcommands: validate, solve, distance, simulate, verify, sweep, generate.
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace npdg
