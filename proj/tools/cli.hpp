#pragma once

#include <string>
#include <vector>

namespace divroot::cli {

enum ExitCode : int { kOk = 0, kClaimFailure = 1, kConfigError = 2 };

/// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace divroot::cli
