#pragma once

#include <string>
#include <vector>

namespace frfx {

/// Entry point behind the `frfx` binary. `args` excludes the program name.
/// Returns 0 on success; on failure prints a single-line diagnostic to
/// stderr and returns nonzero.
int run_cli(const std::vector<std::string>& args);

}  // namespace frfx
