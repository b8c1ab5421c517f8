#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wgs::cli {

enum ExitCode : int {
  Success = 0,
  Failure = 1,
  InvalidInput = 2,
  IoFailure = 3,
  NotApplicable = 4,
};

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wgs::cli
