// In-process entry point of the rankprover command line, so tests can drive
// it without spawning processes.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rankprover::cli {

// Exit statuses. Stable; documented in the README.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1; // bad flags, unreadable or unwritable files
inline constexpr int kExitParse = 2;
inline constexpr int kExitNotDerivable = 3;
inline constexpr int kExitInconsistent = 4;
inline constexpr int kExitAborted = 5;
inline constexpr int kExitCheckFailed = 6;
inline constexpr int kExitUnsound = 7;    // oracle-compare found an engine bound the oracle refutes
inline constexpr int kExitScaleGuard = 8; // oracle-compare refused an input that is too large

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rankprover::cli
