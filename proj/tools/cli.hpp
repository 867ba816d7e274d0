#pragma once

#include <ostream>

namespace corput::cli {

enum ExitCode : int { kOk = 0, kVerdictFailure = 1, kConfigError = 2, kIoError = 3 };

// Entire command line front end; main() just forwards here.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace corput::cli
