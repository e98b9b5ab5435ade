#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace acbc::cli {

// Exit codes: 0 success, 1 internal failure (or failed selftest), 2 invalid
// input or usage.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

// Entry point for `acbc <estimate|simulate|selftest> [flags]`; `args`
// excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace acbc::cli
