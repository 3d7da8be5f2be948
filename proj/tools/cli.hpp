#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cusmuda::cli {

enum ExitCode : int {
  ok = 0,
  usage_error = 1,
  max_iterations = 2,
  verify_failed = 3,
  tree_too_large = 4,
  runtime_error = 5,
};

/// Relative gap accepted by `verify`.
inline constexpr double kVerifyTolerance = 1e-4;

/// Entry point shared by the executable and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cusmuda::cli
