#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lk {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (point clouds, coefficient files). Carries the
/// 1-based line number, or 0 when the problem is not tied to one line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

  /// Same error with "<file>: " prepended to the message.
  ParseError in_file(const std::string& file) const;

 private:
  struct Raw {};
  ParseError(Raw, const std::string& message, std::size_t line);
  std::size_t line_;
};

/// Configuration schema violations; the message names the offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: singular systems, non-convergence, isolated points.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lk
