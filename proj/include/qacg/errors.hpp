#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qacg {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. Carries the 1-based line (or record index).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Duplicate key where uniqueness is required.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// Input data violates an operation's precondition.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A backend call failed (transport, malformed response, unavailable).
class BackendError : public Error {
 public:
  using Error::Error;
};

/// Bad command-line or configuration usage.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace qacg
