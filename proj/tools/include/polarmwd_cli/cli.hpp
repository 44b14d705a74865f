#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polarmwd::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,       // oracle disagreement, rerun mismatch, unexpected errors
  kUsage = 2,         // bad flags or parameter values
  kPrecondition = 3,  // e.g. a non-decreasing set handed to the closed form
  kIo = 4,
};

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "POLARMWD_OUT_DIR";

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polarmwd::cli
