#pragma once

#include <stdexcept>
#include <string>

namespace ucw {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent setup: dimension mismatches, missing interventional data,
// unknown builtin names.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Data that violates a documented invariant (negative probabilities,
// unnormalized distributions, non-PSD effects).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class InvalidCorrelatorError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed text whose meaning is rejected (e.g. sqrt of a form that is
// not provably nonnegative).
class SemanticError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace ucw
