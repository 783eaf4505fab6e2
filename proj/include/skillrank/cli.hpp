#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skillrank {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one pipeline subcommand. args[0] is the program name. Normal output
// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skillrank
