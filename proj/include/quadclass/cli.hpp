#pragma once

#include <string>
#include <vector>

namespace quadclass {

// Full command-line driver. `args` excludes the program name.
// Exit codes: 0 all certificates valid and no internal errors,
// 1 usage or configuration problems, 2 invalid certificate or an
// internal consistency failure.
int run_command(const std::vector<std::string>& args);

}  // namespace quadclass
