#pragma once

#include <stdexcept>
#include <string>

namespace onoma {

/// Error categories double as process exit codes for the command-line tool.
enum class ErrorKind : int {
  usage = 1,
  input_format = 2,
  config = 3,
  invariant = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

/// Malformed or inconsistent input data (files, rows, values).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what)
      : Error(ErrorKind::input_format, what) {}
  InputError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ErrorKind::input_format,
              source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Parameters outside their documented range.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::config, what) {}
};

/// A computed result broke one of its own invariants.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorKind::invariant, what) {}
};

}  // namespace onoma
