#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace relaybounds_cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name. Output goes to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relaybounds_cli
