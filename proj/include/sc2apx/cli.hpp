#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sc2apx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line (without the program name). Subcommands:
// run, reproduce, compare, mae, list-units, list-matchups.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sc2apx
