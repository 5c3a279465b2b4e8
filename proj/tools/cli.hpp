#pragma once

#include <ostream>

namespace qknots::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCap = 3;

/// Runs the qknots command line. Reports go to `out` (or the --output file),
/// diagnostics to `err`. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qknots::cli
