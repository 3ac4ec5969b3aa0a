#include "eqps/rational.hpp"

#include <charconv>

#include "eqps/error.hpp"

namespace eqps {

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) {
    return std::to_string(q.numerator());
  }
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("not a rational number: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') {
    text.remove_prefix(1);
  }
  while (!text.empty() && text.back() == ' ') {
    text.remove_suffix(1);
  }
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text, text));
  }
  const auto num = parse_int(text.substr(0, slash), text);
  const auto den = parse_int(text.substr(slash + 1), text);
  if (den == 0) {
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

}  // namespace eqps
