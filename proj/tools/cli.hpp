#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amm::cli {

// Runs one subcommand; args exclude the program name.  Returns the process
// exit code: 0 success/verified, 1 refuted, 2 resource/inconclusive, 3 usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amm::cli
