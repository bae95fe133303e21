#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adeglab {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition (arity mismatch, bad index,
/// malformed literal, excluded function class).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A size, budget or cap was exceeded. Never silently truncated.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Floating-point LP failure (cycling guard or iteration cap exhausted).
/// Distinct from an infeasible problem.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A computed object failed its own re-verification. Always a bug or a
/// genuine counterexample; never swallowed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Syntax or arity error in a function expression, with the byte offset of
/// the offending token.
class ParseError : public PreconditionError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : PreconditionError(message + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace adeglab
