#pragma once

namespace walign::cli {

/// Entry point behind the `walign` binary. Exit codes: 0 success,
/// 1 validation error, 2 numerical failure.
int run(int argc, const char* const* argv);

}  // namespace walign::cli
