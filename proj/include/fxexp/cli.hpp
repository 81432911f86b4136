// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fxexp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< I/O or internal error
inline constexpr int kExitUsage = 2;    ///< bad flags or an unrepresentable input

/// args[0] is the program name. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b" (inclusive), "a,b,c", or a single integer. Throws std::invalid_argument.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace fxexp::cli
