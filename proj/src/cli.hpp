#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lcol::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 2, kBudgetExceeded = 3, kBadArguments = 4 };

// Runs one command line (without the program name). Results go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lcol::cli
