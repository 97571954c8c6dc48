#pragma once

namespace gbht::cli {

/// Entry point of the `gbht` tool. Returns the process exit code:
/// 0 success, 2 usage error, 1 runtime error.
int run(int argc, char** argv);

}  // namespace gbht::cli
