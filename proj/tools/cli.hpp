#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bootcopula::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one `bootcomb` invocation in-process. `args` excludes the program
/// name. Results go to `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bootcopula::cli
