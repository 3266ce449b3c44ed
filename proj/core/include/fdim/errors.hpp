#pragma once

#include <stdexcept>
#include <string>

namespace freedim {

/// Base class for every error raised by the library. `exit_code()` is the
/// stable process exit status the command-line tool maps the error onto.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Malformed input text (expressions, fractions). Carries a 1-based column.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t column)
      : Error(what + " (column " + std::to_string(column) + ")"), column_(column) {}
  std::size_t column() const noexcept { return column_; }
  int exit_code() const noexcept override { return 1; }

 private:
  std::size_t column_;
};

/// A precondition on an argument was violated (wrong shape, out-of-range value).
class InvalidArgument : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

/// Operation is not defined for the given operand kind (e.g. tensoring a
/// diffuse summand).
class UnsupportedOperand : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Matrix or DElement shapes do not agree.
class ShapeMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// No dimension rule applies to an expression node; the message names the
/// failed hypothesis.
class InapplicableError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Configuration document violates its schema; `pointer()` is a JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }
  int exit_code() const noexcept override { return 4; }

 private:
  std::string pointer_;
};

/// Numerical routine failed (e.g. singular block during polar extraction).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace freedim
