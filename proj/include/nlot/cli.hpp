#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlot {

/// Runs the command line tool.  Exit codes: 0 all claims pass, 1 a claimed
/// property failed verification, 2 structural/usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace nlot
