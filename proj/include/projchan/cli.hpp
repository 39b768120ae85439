#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace projchan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUsage = 64;

/// Runs the command line `args` (args[0] is the program name). The report goes
/// to `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projchan::cli
