#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krein {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitPass = 0,
  kExitViolation = 1,      // verdict negative or precondition refused
  kExitIndeterminate = 2,  // indeterminate verdict or numerical failure
  kExitUsage = 3,          // bad input or usage
};

/// args[0] is the program name, as in argv. The JSON report (or error
/// object) goes to `out` unless an output file is named; diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace krein
