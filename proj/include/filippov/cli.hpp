#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace filippov {

/// Runs the filippov-lab command line; args exclude the program name. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace filippov
