#pragma once

#include <iosfwd>

namespace bqbench::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kAdapter = 3,
  kPartial = 4,
};

// Entry point for the `bqbench` tool: rank, noise, eval and compare
// subcommands. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bqbench::cli
