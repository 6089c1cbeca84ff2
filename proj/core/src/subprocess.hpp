#pragma once

// Internal: argv-style subprocess execution (no shell).

#include <string>
#include <vector>

namespace vidctx::detail {

struct SubprocessResult {
    int exit_code = -1;     // 127 = command not found, negative = killed by signal
    std::string output;     // combined stdout + stderr
};

SubprocessResult run_subprocess(const std::vector<std::string>& args);

}  // namespace vidctx::detail
