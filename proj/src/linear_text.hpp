#pragma once

// Text form shared by every ring: "1 + 2*[G/H2]_{a1} - 1/2*[G/e]".
// A term with an empty name is a multiple of the unit.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eqps/rational.hpp"

namespace eqps::detail {

using NamedTerm = std::pair<std::string, Rational>;

std::string render_terms(const std::vector<NamedTerm>& terms);

/// Splits at top-level signs. Accepts "c*[..]", "c[..]", "(c)[..]", "[..]" and bare "c".
/// Throws ParseError.
std::vector<NamedTerm> parse_terms(std::string_view text);

std::string strip_spaces(std::string_view text);

}  // namespace eqps::detail
