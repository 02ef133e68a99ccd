#pragma once

#include <stdexcept>
#include <string>

namespace pcurl {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based; 0 means "end of file".
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Input parsed fine but violates a structural invariant (mesh topology etc).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an API precondition (mismatched meshes, bad sizes, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace pcurl
