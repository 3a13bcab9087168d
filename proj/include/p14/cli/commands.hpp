#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace p14::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kInputError = 2,
  kPolicyError = 3,
};

/// Runs the command line (args exclude the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// printf("%.17g"); the formatting used by every CSV and text output.
std::string format_number(double value);

}  // namespace p14::cli
