#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glspace {

/// Argument outside the mathematical domain of an operation (q < 1, delta <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input violates a structural precondition of an operator (grid shape, degree).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every term of a measurement or check was skipped (e.g. all test functions vanish).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or specification string. `line` is 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : std::runtime_error(format(source, line, what)), source_(std::move(source)), line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& source, std::size_t line, const std::string& what) {
    std::string msg = source;
    if (line > 0) msg += ":" + std::to_string(line);
    return msg + ": " + what;
  }

  std::string source_;
  std::size_t line_;
};

}  // namespace glspace
