#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcf {

/// Base class for every domain error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or well-formedness error in formula / theory / structure text.
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

class SignatureError : public Error {
 public:
  using Error::Error;
};

/// Structural evaluation failure (missing qcf table, unbound variable, ...).
/// Distinct from a formula evaluating to false.
class EvalError : public Error {
 public:
  using Error::Error;
};

class OrderError : public Error {
 public:
  using Error::Error;
};

class SearchError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcf
