#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace squeeze {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Writes results under the output root
// (SQUEEZE_LAB_OUT_DIR or the working directory) and a manifest beside them.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace squeeze
