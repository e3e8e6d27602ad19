#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pseudotest {

struct ProcessRequest {
  std::vector<std::string> argv;
  std::filesystem::path cwd;
  std::map<std::string, std::string> env_set;
  std::vector<std::string> env_unset;
  std::chrono::milliseconds budget{std::chrono::minutes(5)};
  /// stdout and stderr are both redirected here.
  std::filesystem::path output_file;
};

struct ProcessResult {
  enum class End { exited, signaled, timed_out };
  End end = End::exited;
  int exit_code = 0;
  int signal = 0;
  std::chrono::milliseconds elapsed{0};

  bool succeeded() const noexcept { return end == End::exited && exit_code == 0; }
};

/// Runs the request in its own process group. On budget expiry the whole
/// group receives SIGKILL. Throws EnvironmentError if the process cannot start.
ProcessResult run_process(const ProcessRequest& request);

/// Last `max_bytes` of a file, or empty when unreadable.
std::string read_tail(const std::filesystem::path& file, std::size_t max_bytes);

}  // namespace pseudotest
