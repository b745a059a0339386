#ifndef BASKET_TOOLS_CLI_APP_HPP
#define BASKET_TOOLS_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace basket::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kNonConvergence = 2;

/// Runs the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace basket::cli

#endif  // BASKET_TOOLS_CLI_APP_HPP
