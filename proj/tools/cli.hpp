#pragma once

#include <iosfwd>

namespace stablefit::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;        ///< bad flags, invalid parameters, unreadable input path
inline constexpr int kExitData = 3;         ///< malformed, empty or insufficient data
inline constexpr int kExitConvergence = 4;  ///< an optimizer or quadrature failed
inline constexpr int kExitOther = 1;

/// Parse argv and run one subcommand, writing results to `out` (or --out) and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stablefit::cli
