// SPDX-License-Identifier: Apache-2.0
//
// Subcommands of the robsem tool. Each writes its tables into the output
// directory and returns a process exit code:
//   0 ok, 1 usage or configuration, 2 invariant violation, 3 numeric failure.
#pragma once

#include <iosfwd>

#include "config.hpp"

namespace robsem::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvariant = 2, kNumeric = 3 };

int cmd_iterate(const RunConfig& config, std::ostream& log);
int cmd_hjb(const RunConfig& config, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& log);
int cmd_sensitivity(const RunConfig& config, std::ostream& log);
int cmd_consistency(const RunConfig& config, std::ostream& log);

/// Full command line entry point; maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robsem::cli
