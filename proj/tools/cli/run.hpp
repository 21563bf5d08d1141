#pragma once

#include <iosfwd>

namespace magstab::cli {

enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitConfig = 2 };

// Full command-line entry point; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magstab::cli
