#pragma once

#include <cstdint>

#include "eqps/error.hpp"
#include "eqps/rational.hpp"

namespace eqps {

// Overflow-checked integer arithmetic. Series coefficients grow quickly under
// repeated products; a silent wrap would corrupt exact results.

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw MathError("integer overflow in addition");
  }
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw MathError("integer overflow in multiplication");
  }
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

// boost::rational checks nothing; rational coefficients stay small here
// (denominators divide subgroup orders).
inline Rational checked_add(const Rational& a, const Rational& b) { return a + b; }
inline Rational checked_mul(const Rational& a, const Rational& b) { return a * b; }
inline Rational checked_neg(const Rational& a) { return -a; }

}  // namespace eqps
