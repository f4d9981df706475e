#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace navgeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Reports go to --out when given, otherwise to
// `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace navgeo::cli
