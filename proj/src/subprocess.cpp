#include "pseudotest/subprocess.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <thread>

#include "pseudotest/errors.hpp"

extern char** environ;

namespace pseudotest {
namespace {

std::vector<std::string> build_environment(const ProcessRequest& req) {
  std::vector<std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string entry(*e);
    const auto eq = entry.find('=');
    const std::string key = entry.substr(0, eq);
    if (req.env_set.count(key)) continue;
    if (std::find(req.env_unset.begin(), req.env_unset.end(), key) != req.env_unset.end()) continue;
    env.push_back(std::move(entry));
  }
  for (const auto& [k, v] : req.env_set) env.push_back(k + "=" + v);
  return env;
}

class SpawnResources {
 public:
  SpawnResources() {
    posix_spawn_file_actions_init(&actions_);
    posix_spawnattr_init(&attr_);
  }
  ~SpawnResources() {
    posix_spawn_file_actions_destroy(&actions_);
    posix_spawnattr_destroy(&attr_);
  }
  SpawnResources(const SpawnResources&) = delete;
  SpawnResources& operator=(const SpawnResources&) = delete;

  posix_spawn_file_actions_t actions_;
  posix_spawnattr_t attr_;
};

}  // namespace

ProcessResult run_process(const ProcessRequest& req) {
  if (req.argv.empty()) throw ContractViolation("run_process: empty argv");

  SpawnResources res;
  const std::string out = req.output_file.empty() ? std::string("/dev/null") : req.output_file.string();
  posix_spawn_file_actions_addopen(&res.actions_, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&res.actions_, STDOUT_FILENO, out.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&res.actions_, STDOUT_FILENO, STDERR_FILENO);
  if (!req.cwd.empty()) posix_spawn_file_actions_addchdir_np(&res.actions_, req.cwd.c_str());

  sigset_t defaults;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  sigaddset(&defaults, SIGINT);
  sigaddset(&defaults, SIGTERM);
  sigset_t empty_mask;
  sigemptyset(&empty_mask);
  posix_spawnattr_setsigdefault(&res.attr_, &defaults);
  posix_spawnattr_setsigmask(&res.attr_, &empty_mask);
  posix_spawnattr_setpgroup(&res.attr_, 0);
  posix_spawnattr_setflags(&res.attr_, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF | POSIX_SPAWN_SETSIGMASK);

  std::vector<char*> argv;
  for (const auto& a : req.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  auto env_strings = build_environment(req);
  std::vector<char*> envp;
  for (auto& e : env_strings) envp.push_back(e.data());
  envp.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, argv[0], &res.actions_, &res.attr_, argv.data(), envp.data());
  if (rc != 0)
    throw EnvironmentError("cannot start '" + req.argv[0] + "': " + std::strerror(rc));

  ProcessResult result;
  int status = 0;
  auto pause = std::chrono::microseconds(500);
  while (true) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) throw EnvironmentError(std::string("waitpid failed: ") + std::strerror(errno));
    if (std::chrono::steady_clock::now() - start >= req.budget) {
      ::kill(-pid, SIGKILL);
      while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
      }
      result.end = ProcessResult::End::timed_out;
      break;
    }
    std::this_thread::sleep_for(pause);
    pause = std::min<std::chrono::microseconds>(pause * 2, std::chrono::milliseconds(20));
  }
  // reap anything the child left behind in its group
  ::kill(-pid, SIGKILL);
  result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  if (result.end != ProcessResult::End::timed_out) {
    if (WIFEXITED(status)) {
      result.end = ProcessResult::End::exited;
      result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      result.end = ProcessResult::End::signaled;
      result.signal = WTERMSIG(status);
    }
  }
  return result;
}

std::string read_tail(const std::filesystem::path& file, std::size_t max_bytes) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return {};
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  const std::size_t from = size > max_bytes ? size - max_bytes : 0;
  in.seekg(static_cast<std::streamoff>(from));
  std::string data(size - from, '\0');
  in.read(data.data(), static_cast<std::streamsize>(data.size()));
  return data;
}

}  // namespace pseudotest
