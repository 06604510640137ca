#pragma once

#include <string>

#include "config.hpp"

namespace pdrelax::cli {

enum ExitCode : int {
  kPass = 0,
  kInternal = 1,
  kTolerance = 2,
  kConvergence = 3,
  kConfig = 4,
};

struct RunOptions {
  int jobs = 1;
  bool quiet = false;
};

int cmd_envelope(const RunConfig& rc, const RunOptions& opt);
int cmd_fem1d(const RunConfig& rc, const RunOptions& opt);
int cmd_point3d(const RunConfig& rc, const RunOptions& opt);
int cmd_plate(const RunConfig& rc, const RunOptions& opt);

// report.json for failures that happen before a command starts.
void write_failure_report(const std::string& out_dir, const std::string& command, int code,
                          const std::string& status, const std::string& message);

}  // namespace pdrelax::cli
