#pragma once

#include <ostream>

namespace fusion::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFalse = 1;    // a checked property does not hold
inline constexpr int kExitInvalid = 2;  // invalid input or usage
inline constexpr int kExitFailure = 3;  // singular operator or other numerical failure

inline constexpr const char* kVersion = "0.1.0";

/// Runs the command-line tool. Reports go to `out` as JSON; diagnostics and
/// usage text go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fusion::cli
