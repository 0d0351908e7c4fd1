#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fivemin {

// Bad parameters, violated preconditions, or an invalid configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value outside a function's mathematical domain (log2 of a fan-out below
// one, a degenerate tree height).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input data: device files, trace files, unordered traces.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fivemin
