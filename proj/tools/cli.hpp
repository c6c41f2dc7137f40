#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ucodes::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

/// Runs one command line. args[0] is the program name. JSON results go to
/// --out when given and to `out` otherwise; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ucodes::cli
