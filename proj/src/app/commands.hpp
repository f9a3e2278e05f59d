#pragma once

#include <string>
#include <vector>

#include "kontact/document.hpp"

namespace kontact::app {

// Exit codes shared by the C API and the command line.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct Outcome {
  int exit_code = kExitPass;
  std::string out;  // report (text or JSON)
  std::string err;  // single-line diagnostic on exit 2
};

const std::vector<std::string>& command_names();

// request: {"file": path, "json": bool, "seed": int, "tol": number, ...command options}.
// Never throws; library errors become exit 2 with the message in err.
Outcome run_command(const std::string& command, const json& request);

}  // namespace kontact::app
