#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mildrep::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,      ///< bad arguments or domain violation
    kInternal = 3,   ///< an internal invariant failed
    kNoConvergence = 4,
};

/// Runs one subcommand. args excludes the program name. Results go to out
/// (or the --output file), messages to err. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mildrep::cli
