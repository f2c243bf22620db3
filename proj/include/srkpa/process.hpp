#pragma once

#include <optional>
#include <string>
#include <vector>

namespace srkpa {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed or terminated by a signal
  bool timed_out = false;
  double wall_seconds = 0.0;
  std::string output;  // stdout
};

/// Runs argv[0] (PATH lookup) with stdout captured and stderr discarded.
/// The child gets its own process group; when `timeout_seconds` elapses the
/// whole group is killed. Throws HarnessError if the program cannot start.
ProcessResult run_process(const std::vector<std::string>& argv, std::optional<double> timeout_seconds,
                          const std::vector<std::string>& extra_env = {});

}  // namespace srkpa
