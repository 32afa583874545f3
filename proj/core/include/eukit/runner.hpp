#pragma once

#include <string>

#include "eukit/config.hpp"

namespace eukit {

// Exit-code contract: 0 all checks pass; 2 a property check failed (a math
// result, not a bug); 3 indeterminate-only issues; 1 theorem-harness
// inconsistency (signals a defect); 64 malformed configuration.
struct RunResult {
  int exit_code = 0;
  std::string jsonl;  // machine-readable stream (stdout or --out file)
  std::string text;   // human-readable summary (always stdout)
};

RunResult run_check(const RunConfig& cfg);
RunResult run_verify_theorem(const RunConfig& cfg);
RunResult run_search_qc(const RunConfig& cfg);
RunResult run_bench(const RunConfig& cfg);

// Dispatch by subcommand name; maps ConfigError and kin to exit 64 with the
// message in `text`.
RunResult run_command(const std::string& command, const RunConfig& cfg);

}  // namespace eukit
