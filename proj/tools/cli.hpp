#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynper::cli {

enum ExitStatus : int {
    exit_ok = 0,
    exit_usage = 1,      ///< bad flags, bad threshold, non-minimum vertex
    exit_input = 2,      ///< unreadable or malformed input
    exit_divergence = 3, ///< the two pairings disagree
};

/// Runs one invocation. `args` excludes the program name. Standard input and
/// output stand in for the path "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

} // namespace dynper::cli
