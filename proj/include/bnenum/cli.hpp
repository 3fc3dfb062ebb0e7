#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bnenum {

namespace exit_code {
constexpr int ok = 0;
constexpr int usage = 1;
constexpr int parse = 2;
constexpr int validation = 3;
constexpr int cap = 4;
}  // namespace exit_code

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit code. Records and reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnenum
