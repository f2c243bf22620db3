#include "srkpa/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "srkpa/errors.hpp"

extern char** environ;

namespace srkpa {

ProcessResult run_process(const std::vector<std::string>& argv, std::optional<double> timeout_seconds,
                          const std::vector<std::string>& extra_env) {
  if (argv.empty()) throw HarnessError("run_process: empty command");
  int out_pipe[2];
  int err_pipe[2];  // reports exec failure; closed on successful exec
  if (pipe(out_pipe) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0)
    throw HarnessError(std::string("pipe: ") + std::strerror(errno));

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);
  std::vector<std::string> env_storage;
  for (char** e = environ; *e; ++e) env_storage.emplace_back(*e);
  env_storage.insert(env_storage.end(), extra_env.begin(), extra_env.end());
  std::vector<char*> envp;
  for (auto& e : env_storage) envp.push_back(e.data());
  envp.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) throw HarnessError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    execvpe(args[0], args.data(), envp.data());
    const int code = errno;
    [[maybe_unused]] auto n = write(err_pipe[1], &code, sizeof code);
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);

  int exec_errno = 0;
  const bool exec_failed = read(err_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno;
  close(err_pipe[0]);
  if (exec_failed) {
    close(out_pipe[0]);
    waitpid(pid, nullptr, 0);
    throw HarnessError("cannot start '" + argv[0] + "': " + std::strerror(exec_errno));
  }

  ProcessResult result;
  char buf[65536];
  pollfd pfd{out_pipe[0], POLLIN, 0};
  bool open_pipe = true;
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  while (open_pipe) {
    int wait_ms = -1;
    if (timeout_seconds) {
      const double left = *timeout_seconds - elapsed();
      if (left <= 0) {
        result.timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(left * 1000) + 1;
    }
    const int rc = poll(&pfd, 1, wait_ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) continue;
    const ssize_t n = read(out_pipe[0], buf, sizeof buf);
    if (n > 0) result.output.append(buf, static_cast<std::size_t>(n));
    else if (n == 0 || errno != EINTR) open_pipe = false;
  }
  if (result.timed_out) kill(-pid, SIGKILL);
  close(out_pipe[0]);

  int status = 0;
  for (;;) {
    const pid_t done = waitpid(pid, &status, result.timed_out ? 0 : WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) break;
    if (timeout_seconds && elapsed() > *timeout_seconds) {
      // stdout closed but the process kept running
      result.timed_out = true;
      kill(-pid, SIGKILL);
      continue;
    }
    usleep(2000);
  }
  // the group may hold children that outlived the leader
  if (!result.timed_out) kill(-pid, SIGKILL);
  result.wall_seconds = elapsed();
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace srkpa
