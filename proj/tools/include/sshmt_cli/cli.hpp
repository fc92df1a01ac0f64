#pragma once

#include <iosfwd>

namespace sshmt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand. Diagnostics go to `err`, reports (eval) to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sshmt::cli
