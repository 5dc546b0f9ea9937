#include "rtu/runner.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <thread>

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include "rtu/errors.hpp"

namespace rtu {

RunOutcome run_capped(const std::string& shell_command, double captime_seconds) {
  if (!(captime_seconds > 0.0)) throw BadParameters("run_capped: captime must be positive");

  const pid_t pid = fork();
  if (pid < 0) {
    return {0.0, false, true};
  }
  if (pid == 0) {
    rlimit cpu{};
    cpu.rlim_cur = static_cast<rlim_t>(std::ceil(captime_seconds));
    cpu.rlim_max = cpu.rlim_cur + 1;
    setrlimit(RLIMIT_CPU, &cpu);
    execl("/bin/sh", "sh", "-c", shell_command.c_str(), static_cast<char*>(nullptr));
    _exit(127);  // exec failed
  }

  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::duration<double>(captime_seconds);
  int status = 0;
  bool killed = false;
  for (;;) {
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) {
      return {0.0, false, true};
    }
    if (!killed && std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      killed = true;
    }
    std::this_thread::sleep_for(std::chrono::microseconds(500));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    return {0.0, false, true};
  }
  // CPU-limit kills (SIGXCPU/SIGKILL from the rlimit) and watchdog kills are
  // both censored runs.
  const bool cpu_killed = WIFSIGNALED(status) && (WTERMSIG(status) == SIGXCPU ||
                                                  WTERMSIG(status) == SIGKILL);
  if (killed || cpu_killed || elapsed >= captime_seconds) {
    return {captime_seconds, true, false};
  }
  return {elapsed, false, false};
}

}  // namespace rtu
