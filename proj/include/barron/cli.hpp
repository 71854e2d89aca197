#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace barron {

/// Exit codes of dispatch.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNonConvergence = 2;

/// Runs one subcommand. args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace barron
