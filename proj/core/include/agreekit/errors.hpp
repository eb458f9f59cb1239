#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agreekit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data does not satisfy the dataset or scale schema.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : ValidationError(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// Alpha requested on data where no unit carries two or more values.
class NoPairableData : public Error {
 public:
  NoPairableData() : Error("no pairable data: no unit has two or more annotations") {}
};

// Every pairable value is identical, so expected disagreement is zero and
// alpha is undefined.
class DegenerateData : public Error {
 public:
  DegenerateData() : Error("degenerate data: expected disagreement is zero (single value)") {}
};

// A pipeline step was asked to run without its required inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ProviderError : public Error {
 public:
  using Error::Error;
};

class CassetteMiss : public Error {
 public:
  using Error::Error;
};

}  // namespace agreekit
