#pragma once

#include <stdexcept>
#include <string>

namespace minmax {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class WeightError : public Error {
 public:
  using Error::Error;
};

class MembershipError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A type invariant failed (convexity sampling, affinity, nesting, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class NotConvexConcaveError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

class NotConvexError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

class NotAffineError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

class NestingError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

class NegativeMultiplierError : public Error {
 public:
  using Error::Error;
};

class EmptyFiberError : public Error {
 public:
  using Error::Error;
};

class NotSeparableError : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON. Carries the 1-based line and column of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed JSON that does not match the document schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace minmax
