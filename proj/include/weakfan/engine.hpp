#pragma once

// Command dispatcher shared by the CLI binary and the Python bindings.
// Exit codes: 0 success/Certified/WeakFan, 1 Refuted/Violation/NotConstant,
// 2 input or schema error.

#include <string>
#include <vector>

namespace weakfan {

struct RunResult {
  int exit_code = 0;
  std::string output;  // certificate JSON (or summary text / error message)
};

RunResult run_command(const std::vector<std::string>& args);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace weakfan
