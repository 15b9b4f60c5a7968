#ifndef VALKIT_TASK_HPP
#define VALKIT_TASK_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "valkit/json_io.hpp"

namespace valkit {

// Exit severities; a run's exit code is the maximum across its tasks in the
// documented ordering 0 < 1 < 2 < 3 < 64.
inline constexpr int kExitVerified = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitPrecision = 3;
inline constexpr int kExitUsage = 64;

struct RunOptions {
  std::optional<int> degree_bound;     // overrides every presentation's bound
  std::optional<std::uint64_t> seed;   // overrides the task file's seed
  std::string format = "json";         // "json" or "text"
  std::string task_filter;             // run only tasks of this kind ("" = all)
};

// Executes a parsed task file, streaming one record per task plus a summary.
// Returns the exit code.
int run_task_file(const Json& file, const RunOptions& options, std::ostream& out);

// Reads, parses and runs; maps parse failures to exit 64.
int run_task_path(const std::string& path, const RunOptions& options, std::ostream& out);

}  // namespace valkit

#endif
