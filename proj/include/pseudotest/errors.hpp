#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pseudotest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A method definition could not be analyzed structurally.
class StructuralError : public Error {
 public:
  StructuralError(const std::string& what, std::size_t begin, std::size_t end)
      : Error(what + " [span " + std::to_string(begin) + ".." + std::to_string(end) + "]"),
        begin_(begin),
        end_(end) {}
  std::size_t begin() const noexcept { return begin_; }
  std::size_t end() const noexcept { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

/// Lexing or declaration parsing failed at a byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class DiscoveryError : public Error {
 public:
  using Error::Error;
};

class NotAProjectError : public Error {
 public:
  using Error::Error;
};

class StaleInventoryError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation's documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Workspace missing, unreadable, or a subprocess could not be launched.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

class InstrumentationError : public Error {
 public:
  using Error::Error;
};

class ProbeLogError : public Error {
 public:
  ProbeLogError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// The pristine suite is red or flaky; analysis cannot proceed.
class BaselineError : public Error {
 public:
  BaselineError(const std::string& what, std::vector<std::string> failing_tests, bool flaky)
      : Error(what), failing_tests_(std::move(failing_tests)), flaky_(flaky) {}
  const std::vector<std::string>& failing_tests() const noexcept { return failing_tests_; }
  bool flaky() const noexcept { return flaky_; }

 private:
  std::vector<std::string> failing_tests_;
  bool flaky_;
};

class UndefinedStatistic : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A self-check inside the tool failed; the output would be wrong.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pseudotest
