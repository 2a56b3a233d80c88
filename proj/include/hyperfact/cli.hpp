#pragma once

#include <iosfwd>

namespace hyperfact {

// Exit codes shared by every subcommand.
inline constexpr int kExitClean = 0;
inline constexpr int kExitDiscrepancy = 1;
inline constexpr int kExitIndeterminate = 2;
inline constexpr int kExitUsage = 3;

// Entry point of the hyperfact command line tool, with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperfact
