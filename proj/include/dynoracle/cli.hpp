#pragma once

#include <iosfwd>

namespace dynoracle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Entry point for the dynoracle tool: score, oracle, verify, simulate, bench.
// Exit 0 on success, 1 on runtime/data errors (or a failed verification),
// 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dynoracle::cli
