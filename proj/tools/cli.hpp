#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lmk {

/// Entry point behind the `lmk` binary: args are the command-line arguments
/// without the program name. Returns the process exit status; failures print
/// a one-line diagnostic to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmk
