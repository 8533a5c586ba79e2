#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpole::cli {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kSuccess = 0,
    kParseError = 1,
    kUncontrollable = 2,
    kVerificationFailed = 3,
    kScopeViolation = 4,
    kDiverged = 5,
};

/// Runs one invocation; args excludes the program name. Reports go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpole::cli
