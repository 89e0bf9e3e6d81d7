#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dynstab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kCap = 2, kCrossCheck = 3 };

// Runs the command line; args excludes the program name. Report output goes to
// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynstab::cli
