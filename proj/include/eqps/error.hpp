#pragma once

#include <stdexcept>
#include <string>

namespace eqps {

/// Malformed input: bad JSON, bad syntax in a class or series string.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a mathematical invariant
/// (non-associative table, non-resolution graph, inconsistent character).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation that cannot be carried out on valid inputs
/// (non-invertible series, non-integral exponent, ambiguous selection).
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqps
