#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nrs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRefused = 2;

/// Environment variable read for the worker count when --threads is absent.
inline constexpr const char* kThreadsEnv = "NRS_THREADS";

/// Runs one command line (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nrs::cli
