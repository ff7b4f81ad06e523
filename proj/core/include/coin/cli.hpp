#pragma once

namespace coin {

// Command-line entry point (subcommands fs, ss, coin, simulate, oracle-check).
// Returns 0 on success, 2 on configuration errors, 1 on runtime errors.
int cli_main(int argc, const char* const* argv);

}  // namespace coin
