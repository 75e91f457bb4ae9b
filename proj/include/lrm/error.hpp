#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrm {

/// Input violates a documented precondition (bad length, out-of-range parameter, gap in data).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Computation is undefined for the given data (zero variance, empty neighborhoods).
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed text input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lrm
