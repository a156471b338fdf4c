#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symkit::cli {

// Stable contract for scripts.
enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsage = 2, kGateRejected = 3 };

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symkit::cli
