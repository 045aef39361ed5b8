#pragma once

#include <iosfwd>

namespace odcal::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kConfigFailure = 2 };

/// Entry point of the odcal tool; argv[0] is the program name.
/// Subcommands: calibrate, simulate, synth.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace odcal::cli
