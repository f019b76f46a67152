#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bunkbed::cli {

enum ExitCode : int { kOk = 0, kAssertionFailed = 1, kUsageError = 2 };

/// Runs one command line (args excludes the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace bunkbed::cli
