#pragma once
#include <iosfwd>
#include <string>
#include <vector>

namespace pseudoradial::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNumericalFailure = 1;
inline constexpr int kRefused = 2;
inline constexpr int kUsage = 64;

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pseudoradial::cli
