#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Boost 1.74 compares a rational with a plain integer through a pair of
// templates that, under C++20 reversed-operator lookup, call each other
// forever. These exact non-template overloads win overload resolution.
namespace boost {

inline bool operator==(const rational<std::int64_t>& a, int b) { return a == rational<std::int64_t>(b); }
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) { return a == rational<std::int64_t>(b); }

}  // namespace boost

namespace eqps {

using Rational = boost::rational<std::int64_t>;

/// "p/q" or "p"; reduced, sign on the numerator.
std::string to_string(const Rational& q);

/// Accepts "p", "-p", "p/q". Throws ParseError.
Rational parse_rational(std::string_view text);

inline bool is_integral(const Rational& q) { return q.denominator() == 1; }

}  // namespace eqps
