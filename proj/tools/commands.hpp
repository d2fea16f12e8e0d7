#pragma once

#include <string>
#include <vector>

namespace avmac::cli {

// Parses and runs one invocation. Exit codes: 0 success, 1 runtime numerical
// failure, 2 input or usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace avmac::cli
