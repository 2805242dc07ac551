#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace autoconv::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 1 certification failure, 2 usage error, 3 bad input.
enum ExitCode : int { kOk = 0, kCertificationFailed = 1, kUsage = 2, kBadInput = 3 };

/// Runs one command line; args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace autoconv::cli
