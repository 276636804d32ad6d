#pragma once

#include <ostream>

namespace varstab {

/// Exit codes beyond the verdict codes 0, 1 and 2.
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitInternal = 70;

/// Runs the command line front end; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace varstab
