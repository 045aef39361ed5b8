#pragma once

#include <stdexcept>
#include <string>

namespace odcal {

/// Caller passed an argument outside the operation's domain.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation invoked on an object that cannot support it (e.g. no edges).
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Genome does not match the model's layout.
class InvalidGenome : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Optimizer or bounds configuration cannot be run.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace odcal
