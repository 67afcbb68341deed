#pragma once

#include <iosfwd>

namespace emv::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kDomain = 3, kIo = 4 };

/// Entry point of the command-line tool; writes to out/err instead of the
/// process streams so it can be driven in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace emv::cli
