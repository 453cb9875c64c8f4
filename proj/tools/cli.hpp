#pragma once

#include <iosfwd>

namespace cabin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // a scenario, replay or session failed
inline constexpr int kExitUsage = 2;    // bad arguments or configuration

// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cabin::cli
