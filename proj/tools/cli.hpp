#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace narval::cli {

enum ExitCode : int {
    kOk = 0,
    kViolation = 1,
    kUsage = 2,
};

/// Runs the command line `args` (without the program name). Results go to
/// `out`; diagnostics and sweep progress go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace narval::cli
