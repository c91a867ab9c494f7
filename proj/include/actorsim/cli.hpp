#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace actorsim {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitLawViolation = 2;
inline constexpr int kExitNotHalted = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitParse = 65;
inline constexpr int kExitNoInput = 66;

/// Entry point of actorctl. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace actorsim
