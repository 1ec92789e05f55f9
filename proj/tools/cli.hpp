#pragma once

#include <string>
#include <vector>

namespace rfspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Runs the command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

} // namespace rfspec::cli
