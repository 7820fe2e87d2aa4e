#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nre::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one nresim invocation; args exclude the program name. Progress and
/// diagnostics go to `err`, command output to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nre::cli
