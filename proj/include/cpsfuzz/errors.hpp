#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpsfuzz {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelValidationError : public Error {
 public:
  using Error::Error;
};

/// A capability value lies outside its component's domain.
class CapabilityDomainError : public Error {
 public:
  using Error::Error;
};

class UnknownSensorError : public Error {
 public:
  using Error::Error;
};

class UnboundVariableError : public Error {
 public:
  using Error::Error;
};

/// Slice bounds outside 1 <= k <= l <= n.
class IndexError : public Error {
 public:
  using Error::Error;
};

class EmptySetError : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

class NotDeduplicatedError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class NotReproducibleError : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableInBudget : public Error {
 public:
  using Error::Error;
};

class NoWalksGenerated : public Error {
 public:
  using Error::Error;
};

/// Syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cpsfuzz
