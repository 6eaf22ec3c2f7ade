#pragma once

#include <stdexcept>
#include <string>

namespace bvtrace {

/// Mathematical precondition failure (singular pairing, inverting zero, ...).
/// The CLI maps it to exit code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The question cannot be settled at the available truncation order.
class UndecidableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed input text; carries a 1-based line/column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column)
      : std::runtime_error(message + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace bvtrace
