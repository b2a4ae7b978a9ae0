#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcalib::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInputError = 2, kBudgetError = 3 };

/// Runs one command line (args excludes the program name). Human-readable
/// output goes to `out`, diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcalib::cli
