#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smoothcvx::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Runs one command (smooth, envelope, smoothmax, verify, corpus). `args`
/// excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smoothcvx::cli
