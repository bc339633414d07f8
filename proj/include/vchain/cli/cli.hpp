#pragma once

#include <string>
#include <vector>

namespace vchain::cli {

/// Entry point behind the `vchain` binary; args excludes argv[0].
/// Exit codes: 0 success, 1 verification failure, 2 usage/config error.
int run(const std::vector<std::string>& args);

}  // namespace vchain::cli
