#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plog {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed knowledge-base text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Undeclared, duplicate or ill-typed names; out-of-range values.
class InputError : public Error {
 public:
  using Error::Error;
};

// A configured size cap (atoms, worlds, constraints, auxiliary variables) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Sentences or beliefs built over different vocabularies.
class VocabularyMismatch : public Error {
 public:
  using Error::Error;
};

// Conditioning on a sentence of probability zero.
class UndefinedConditional : public Error {
 public:
  using Error::Error;
};

// The constraint set admits no probability.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A solver failed to reach its tolerance; distinct from infeasibility.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace plog
