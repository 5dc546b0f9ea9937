#pragma once

#include <string>

namespace rtu {

/// Outcome of one capped child-process run.
struct RunOutcome {
  double runtime_seconds = 0.0;  // capped at the captime for censored runs
  bool censored = false;
  bool spawn_failed = false;
};

/// Runs `shell_command` under /bin/sh with a CPU-time rlimit at the captime
/// plus a wall-clock watchdog that kills the child when the captime elapses
/// (sleeping processes consume no CPU, so the rlimit alone cannot censor
/// them). Records wall-clock elapsed time; censored runs record exactly the
/// captime. Safe to call concurrently from multiple threads.
RunOutcome run_capped(const std::string& shell_command, double captime_seconds);

}  // namespace rtu
