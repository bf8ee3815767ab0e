#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace failsim::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;   ///< bad flags, config, or input files
inline constexpr int exit_numerical = 2; ///< the computation itself failed

/**
 * Runs one `failsim` invocation. `args` excludes the program name. Progress
 * goes to `out`, diagnostics to `err`. On a non-zero exit no output files of
 * this run remain.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace failsim::cli
