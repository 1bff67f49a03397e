#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace logicbench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // domain failure, e.g. an invalid exercise
inline constexpr int kExitUsage = 2;    // bad arguments, missing or malformed input files

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logicbench
