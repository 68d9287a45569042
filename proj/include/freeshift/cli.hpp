#pragma once

#include <ostream>
#include <string>
#include <vector>

// Command line front end. Exit codes: 0 pass, 1 failure, 2 degraded
// (abort rate above the limit or partial output), 64 usage, 74 IO.
namespace freeshift {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitDegraded = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

/// `args` excludes the program name. JSON goes to `out` unless --out is
/// given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freeshift
