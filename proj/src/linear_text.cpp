#include "linear_text.hpp"

#include <cctype>

#include "eqps/error.hpp"

namespace eqps::detail {

std::string strip_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      out.push_back(c);
    }
  }
  return out;
}

std::string render_terms(const std::vector<NamedTerm>& terms) {
  if (terms.empty()) {
    return "0";
  }
  std::string out;
  bool first = true;
  for (const auto& [name, c] : terms) {
    const bool negative = c < 0;
    const Rational mag = negative ? -c : c;
    if (first) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (name.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += name;
    } else {
      out += to_string(mag) + "*" + name;
    }
  }
  return out;
}

std::vector<NamedTerm> parse_terms(std::string_view raw) {
  const std::string text = strip_spaces(raw);
  if (text.empty()) {
    throw ParseError("empty ring element");
  }
  if (text == "0") {
    return {};
  }
  std::vector<std::string> chunks;
  int depth = 0;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[' || c == '{' || c == '(') {
      ++depth;
    } else if (c == ']' || c == '}' || c == ')') {
      --depth;
      if (depth < 0) {
        throw ParseError("unbalanced brackets in '" + text + "'");
      }
    }
    // A sign right after '(' belongs to a parenthesized coefficient.
    if ((c == '+' || c == '-') && depth == 0 && !current.empty()) {
      chunks.push_back(current);
      current.clear();
    }
    current.push_back(c);
  }
  if (depth != 0) {
    throw ParseError("unbalanced brackets in '" + text + "'");
  }
  chunks.push_back(current);

  std::vector<NamedTerm> out;
  for (std::string chunk : chunks) {
    Rational sign(1);
    if (chunk[0] == '+' || chunk[0] == '-') {
      sign = chunk[0] == '-' ? Rational(-1) : Rational(1);
      chunk.erase(0, 1);
    }
    if (chunk.empty()) {
      throw ParseError("dangling sign in '" + text + "'");
    }
    const auto bracket = chunk.find('[');
    std::string coeff = bracket == std::string::npos ? chunk : chunk.substr(0, bracket);
    std::string name = bracket == std::string::npos ? std::string() : chunk.substr(bracket);
    if (!coeff.empty() && coeff.back() == '*') {
      coeff.pop_back();
      if (name.empty()) {
        throw ParseError("missing basis element after '*' in '" + text + "'");
      }
    }
    if (coeff.size() >= 2 && coeff.front() == '(' && coeff.back() == ')') {
      coeff = coeff.substr(1, coeff.size() - 2);
    }
    Rational c(1);
    if (!coeff.empty()) {
      c = parse_rational(coeff);
    } else if (name.empty()) {
      throw ParseError("empty term in '" + text + "'");
    }
    out.emplace_back(std::move(name), sign * c);
  }
  return out;
}

}  // namespace eqps::detail
