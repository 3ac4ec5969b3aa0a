#include "eqps/series.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eqps/kernels.hpp"
#include "linear_text.hpp"

namespace eqps {

// ---------------------------------------------------------------- degrees

std::int64_t MultiDegree::total() const {
  std::int64_t t = 0;
  for (int e : exponents) {
    t += e;
  }
  return t;
}

bool MultiDegree::is_zero() const {
  return std::all_of(exponents.begin(), exponents.end(), [](int e) { return e == 0; });
}

bool MultiDegree::fits(const MultiDegree& bound) const {
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > bound.exponents[i]) {
      return false;
    }
  }
  return true;
}

MultiDegree MultiDegree::operator+(const MultiDegree& other) const {
  MultiDegree out = *this;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    out.exponents[i] += other.exponents[i];
  }
  return out;
}

MultiDegree MultiDegree::operator-(const MultiDegree& other) const {
  MultiDegree out = *this;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    out.exponents[i] -= other.exponents[i];
  }
  return out;
}

MultiDegree MultiDegree::scaled(int k) const {
  MultiDegree out = *this;
  for (int& e : out.exponents) {
    e *= k;
  }
  return out;
}

bool graded_less(const MultiDegree& a, const MultiDegree& b) {
  const auto ta = a.total();
  const auto tb = b.total();
  return ta != tb ? ta < tb : a < b;
}

std::string monomial_string(const MultiDegree& d) {
  std::string out;
  for (int i = 0; i < d.arity(); ++i) {
    const int e = d[i];
    if (e == 0) {
      continue;
    }
    if (!out.empty()) {
      out += '*';
    }
    out += d.arity() == 1 ? std::string("t") : "t" + std::to_string(i + 1);
    if (e != 1) {
      out += "^" + std::to_string(e);
    }
  }
  return out.empty() ? "1" : out;
}

namespace {

int parse_nonneg(const std::string& digits, std::string_view whole) {
  if (digits.empty() || digits.size() > 9 ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("bad number in '" + std::string(whole) + "'");
  }
  return std::stoi(digits);
}

}  // namespace

MultiDegree parse_monomial(std::string_view raw, int arity) {
  const std::string text = detail::strip_spaces(raw);
  MultiDegree out = MultiDegree::zero(arity);
  if (text == "1") {
    return out;
  }
  std::stringstream in(text);
  std::string factor;
  while (std::getline(in, factor, '*')) {
    if (factor.empty() || factor[0] != 't') {
      throw ParseError("bad monomial '" + text + "'");
    }
    const auto caret = factor.find('^');
    const std::string var = factor.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
    int exp = 1;
    if (caret != std::string::npos) {
      std::string e = factor.substr(caret + 1);
      if (e.size() >= 2 && e.front() == '{' && e.back() == '}') {
        e = e.substr(1, e.size() - 2);
      }
      exp = parse_nonneg(e, text);
    }
    int index = 1;
    if (!var.empty()) {
      index = parse_nonneg(var, text);
    } else if (arity != 1) {
      throw ParseError("bare 't' in a monomial of arity " + std::to_string(arity) + ": '" + text + "'");
    }
    if (index < 1 || index > arity) {
      throw ParseError("variable index out of range in '" + text + "'");
    }
    out.exponents[static_cast<std::size_t>(index - 1)] += exp;
  }
  return out;
}

MultiDegree parse_bound(std::string_view raw) {
  const std::string text = detail::strip_spaces(raw);
  std::stringstream in(text);
  std::string part;
  MultiDegree out;
  while (std::getline(in, part, ',')) {
    out.exponents.push_back(parse_nonneg(part, text));
  }
  if (out.exponents.empty()) {
    throw ParseError("empty bound");
  }
  return out;
}

std::string ring_tag_of(const TildeBurnsideRing&) { return ring_tag(RingKind::TildeBurnside); }
std::string ring_tag_of(const BurnsideQRing&) { return ring_tag(RingKind::BurnsideQ); }
std::string ring_tag_of(const R1Ring&) { return ring_tag(RingKind::R1); }
std::string ring_tag_of(const IntegerRing&) { return ring_tag(RingKind::Integer); }

// ---------------------------------------------------------------- arithmetic

namespace {

bool same_ring(const TildeBurnsideRing& a, const TildeBurnsideRing& b) { return &a == &b || a.group() == b.group(); }
bool same_ring(const BurnsideQRing& a, const BurnsideQRing& b) {
  return &a == &b || a.burnside().catalog().group() == b.burnside().catalog().group();
}
bool same_ring(const R1Ring& a, const R1Ring& b) { return &a == &b || a.catalog().group() == b.catalog().group(); }
bool same_ring(const IntegerRing&, const IntegerRing&) { return true; }

}  // namespace

template <class Ring>
void require_compatible(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b, std::string_view op) {
  if (a.arity() != b.arity()) {
    throw MathError(std::string(op) + ": arity mismatch (" + std::to_string(a.arity()) + " vs " +
                    std::to_string(b.arity()) + ")");
  }
  if (a.bound() != b.bound()) {
    throw MathError(std::string(op) + ": truncation bounds differ");
  }
  if (!same_ring(a.ring(), b.ring())) {
    throw MathError(std::string(op) + ": coefficient rings differ");
  }
}

template <class Ring>
MultiSeries<Ring> series_add(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b) {
  require_compatible(a, b, "series_add");
  MultiSeries<Ring> out = a;
  for (const auto& [d, c] : b.terms()) {
    out.add_term(d, c);
  }
  return out;
}

template <class Ring>
MultiSeries<Ring> series_neg(const MultiSeries<Ring>& a) {
  MultiSeries<Ring> out(a.ring_ptr(), a.bound());
  for (const auto& [d, c] : a.terms()) {
    out.add_term(d, a.ring().neg(c));
  }
  return out;
}

template <class Ring>
MultiSeries<Ring> series_mul(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b) {
  if (a.terms().size() * b.terms().size() >= parallel_threshold() && kernel_threads() > 1) {
    return series_mul_parallel(a, b);
  }
  return series_mul_serial(a, b);
}

template <class Ring>
MultiSeries<Ring> series_inverse(const MultiSeries<Ring>& a) {
  const auto& ring = a.ring();
  const auto zero = MultiDegree::zero(a.arity());
  if (!(a.coefficient(zero) == ring.one())) {
    throw MathError("series_inverse: constant term is " + ring.render(a.coefficient(zero)) + ", not 1");
  }
  std::vector<std::pair<MultiDegree, typename Ring::value_type>> support;
  for (const auto& [d, c] : a.terms()) {
    if (!d.is_zero()) {
      support.emplace_back(d, c);
    }
  }
  // b_d = -sum_{e != 0} a_e b_{d-e}. Degrees are visited in lexicographic
  // order, which extends the componentwise order, starting from 0 and
  // following the support of a.
  MultiSeries<Ring> out(a.ring_ptr(), a.bound());
  out.add_term(zero, ring.one());
  std::set<MultiDegree> pending;
  for (const auto& [e, c] : support) {
    if (e.fits(a.bound())) {
      pending.insert(e);
    }
  }
  while (!pending.empty()) {
    const MultiDegree d = *pending.begin();
    pending.erase(pending.begin());
    auto acc = ring.zero();
    for (const auto& [e, c] : support) {
      if (!e.fits(d)) {
        continue;
      }
      const auto it = out.terms().find(d - e);
      if (it != out.terms().end()) {
        acc = ring.add(acc, ring.mul(c, it->second));
      }
    }
    out.add_term(d, ring.neg(acc));
    for (const auto& [e, c] : support) {
      const auto next = d + e;
      if (next.fits(a.bound())) {
        pending.insert(next);
      }
    }
  }
  return out;
}

template <class Ring>
MultiSeries<Ring> series_pow(const MultiSeries<Ring>& a, int e) {
  if (e < 0) {
    return series_inverse(series_pow(a, -e));
  }
  auto result = MultiSeries<Ring>::one(a.ring_ptr(), a.bound());
  auto base = a;
  while (e > 0) {
    if (e & 1) {
      result = series_mul(result, base);
    }
    e >>= 1;
    if (e > 0) {
      base = series_mul(base, base);
    }
  }
  return result;
}

template <class Ring>
MultiSeries<Ring> truncate(const MultiSeries<Ring>& a, const MultiDegree& bound) {
  if (bound.arity() != a.arity()) {
    throw MathError("truncate: arity mismatch");
  }
  MultiSeries<Ring> out(a.ring_ptr(), bound);
  for (const auto& [d, c] : a.terms()) {
    out.add_term(d, c);
  }
  return out;
}

template <class Ring>
MultiSeries<Ring> substitute_monomial(const MultiSeries<Ring>& a, const std::vector<MultiDegree>& images,
                                      const MultiDegree& bound) {
  if (static_cast<int>(images.size()) != a.arity()) {
    throw MathError("substitute_monomial: " + std::to_string(images.size()) + " images for a series of arity " +
                    std::to_string(a.arity()));
  }
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (images[j].arity() != bound.arity()) {
      throw MathError("substitute_monomial: image " + std::to_string(j + 1) + " has the wrong arity");
    }
    if (images[j].is_zero()) {
      throw MathError("substitute_monomial: image of t" + std::to_string(j + 1) + " is the zero degree");
    }
  }
  MultiSeries<Ring> out(a.ring_ptr(), bound);
  for (const auto& [d, c] : a.terms()) {
    MultiDegree target = MultiDegree::zero(bound.arity());
    for (int j = 0; j < a.arity(); ++j) {
      target = target + images[static_cast<std::size_t>(j)].scaled(d[j]);
    }
    out.add_term(target, c);
  }
  return out;
}

MultiSeries<BurnsideQRing> reduce_rho(const TBSeries& a, std::shared_ptr<const BurnsideQRing> target) {
  const auto& ring = a.ring();
  return map_coefficients(a, std::move(target), [&ring](const TBElement& c) {
    BurnsideQElement out;
    const BurnsideElement image = ring.rho(c);
    for (const auto& [k, v] : image.terms()) {
      out.add_term(k, Rational(v));
    }
    return out;
  });
}

ZSeries reduce_rhohat(const TBSeries& a) {
  const auto& ring = a.ring();
  return map_coefficients(a, std::make_shared<const IntegerRing>(),
                          [&ring](const TBElement& c) { return ring.rhohat(c); });
}

R1Series reduce_eps(const TBSeries& a) {
  const auto& ring = a.ring();
  return map_coefficients(a, ring.r1_ptr(), [&ring](const TBElement& c) { return ring.eps(c); });
}

// ---------------------------------------------------------------- io

namespace {

template <class Ring>
typename Ring::value_type parse_coeff(const Ring& ring, const nlohmann::json& j) {
  if (j.is_string()) {
    return ring.parse(j.get<std::string>());
  }
  if constexpr (std::is_same_v<Ring, IntegerRing>) {
    if (j.is_number_integer()) {
      return j.get<std::int64_t>();
    }
  }
  if constexpr (std::is_same_v<Ring, TildeBurnsideRing>) {
    if (j.is_object()) {
      return ring.from_json(j);
    }
  }
  throw ParseError("series coefficient must be a ring element string");
}

}  // namespace

template <class Ring>
nlohmann::json series_to_json(const MultiSeries<Ring>& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [d, c] : a.terms()) {
    terms.push_back({{"deg", d.exponents}, {"coeff", a.ring().render(c)}});
  }
  return {{"arity", a.arity()}, {"bound", a.bound().exponents}, {"ring", ring_tag_of(a.ring())}, {"terms", terms}};
}

template <class Ring>
MultiSeries<Ring> series_from_json(const nlohmann::json& j, std::shared_ptr<const Ring> ring) {
  try {
    const std::string tag = j.at("ring").get<std::string>();
    if (tag != ring_tag_of(*ring)) {
      throw ParseError("series ring is '" + tag + "', expected '" + ring_tag_of(*ring) + "'");
    }
    MultiDegree bound(j.at("bound").get<std::vector<int>>());
    const int arity = j.at("arity").get<int>();
    if (arity != bound.arity() || arity < 1) {
      throw ParseError("series arity does not match its bound");
    }
    MultiSeries<Ring> out(ring, bound);
    for (const auto& t : j.at("terms")) {
      MultiDegree d(t.at("deg").get<std::vector<int>>());
      if (d.arity() != arity) {
        throw ParseError("term degree has the wrong arity");
      }
      if (std::any_of(d.exponents.begin(), d.exponents.end(), [](int e) { return e < 0; })) {
        throw ParseError("term degree has a negative exponent");
      }
      out.add_term(d, parse_coeff(*ring, t.at("coeff")));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("series: ") + e.what());
  }
}

template <class Ring>
std::string series_to_text(const MultiSeries<Ring>& a) {
  std::ostringstream out;
  for (const auto& [d, c] : a.terms()) {
    out << monomial_string(d) << ": " << a.ring().render(c) << '\n';
  }
  return out.str();
}

#define EQPS_INSTANTIATE_SERIES(R)                                                                            \
  template void require_compatible<R>(const MultiSeries<R>&, const MultiSeries<R>&, std::string_view);        \
  template MultiSeries<R> series_add<R>(const MultiSeries<R>&, const MultiSeries<R>&);                        \
  template MultiSeries<R> series_neg<R>(const MultiSeries<R>&);                                               \
  template MultiSeries<R> series_mul<R>(const MultiSeries<R>&, const MultiSeries<R>&);                        \
  template MultiSeries<R> series_inverse<R>(const MultiSeries<R>&);                                           \
  template MultiSeries<R> series_pow<R>(const MultiSeries<R>&, int);                                          \
  template MultiSeries<R> truncate<R>(const MultiSeries<R>&, const MultiDegree&);                             \
  template MultiSeries<R> substitute_monomial<R>(const MultiSeries<R>&, const std::vector<MultiDegree>&,      \
                                                 const MultiDegree&);                                         \
  template nlohmann::json series_to_json<R>(const MultiSeries<R>&);                                           \
  template MultiSeries<R> series_from_json<R>(const nlohmann::json&, std::shared_ptr<const R>);               \
  template std::string series_to_text<R>(const MultiSeries<R>&);

EQPS_INSTANTIATE_SERIES(TildeBurnsideRing)
EQPS_INSTANTIATE_SERIES(BurnsideQRing)
EQPS_INSTANTIATE_SERIES(R1Ring)
EQPS_INSTANTIATE_SERIES(IntegerRing)

#undef EQPS_INSTANTIATE_SERIES

// ---------------------------------------------------------------- binomials

bool factor_less(const BinomialFactor& a, const BinomialFactor& b) {
  if (a.w != b.w) {
    return graded_less(a.w, b.w);
  }
  return a.cls < b.cls;
}

FactoredSeries::FactoredSeries(int arity, std::vector<BinomialFactor> factors) : arity_(arity) {
  for (const auto& f : factors) {
    if (f.w.arity() != arity) {
      throw MathError("binomial factor degree has arity " + std::to_string(f.w.arity()) + ", expected " +
                      std::to_string(arity));
    }
    if (f.w.is_zero() || std::any_of(f.w.exponents.begin(), f.w.exponents.end(), [](int e) { return e < 0; })) {
      throw MathError("binomial factor needs a nonzero, nonnegative degree, got " + monomial_string(f.w));
    }
  }
  std::sort(factors.begin(), factors.end(), factor_less);
  for (auto& f : factors) {
    if (!factors_.empty() && factors_.back().w == f.w && factors_.back().cls == f.cls) {
      factors_.back().s = checked_add(factors_.back().s, f.s);
      if (factors_.back().s == 0) {
        factors_.pop_back();
      }
    } else if (f.s != 0) {
      factors_.push_back(std::move(f));
    }
  }
}

TBSeries expand_binomial(std::shared_ptr<const TildeBurnsideRing> ring, const BinomialFactor& f,
                         const MultiDegree& bound) {
  if (f.w.arity() != bound.arity()) {
    throw MathError("expand_binomial: factor degree and bound have different arity");
  }
  if (f.w.is_zero()) {
    throw MathError("expand_binomial: zero degree w");
  }
  if (std::any_of(f.w.exponents.begin(), f.w.exponents.end(), [](int e) { return e < 0; })) {
    throw MathError("expand_binomial: negative exponent in w");
  }
  if (f.s == 0) {
    return TBSeries::one(ring, bound);
  }
  TBSeries base(ring, bound);
  for (int k = 0;; ++k) {
    const auto d = f.w.scaled(k);
    if (!d.fits(bound)) {
      break;
    }
    base.add_term(d, ring->symmetric_power(f.cls, k));
  }
  if (f.s > 1 || f.s < -1) {
    if (f.s > 1'000'000 || f.s < -1'000'000) {
      throw MathError("expand_binomial: exponent too large");
    }
    base = series_pow(base, static_cast<int>(f.s > 0 ? f.s : -f.s));
  }
  return f.s < 0 ? series_inverse(base) : base;
}

ZSeries expand_binomial_integer(const MultiDegree& w, std::int64_t e, const MultiDegree& bound) {
  if (w.is_zero()) {
    throw MathError("expand_binomial_integer: zero degree w");
  }
  ZSeries out(std::make_shared<const IntegerRing>(), bound);
  std::int64_t c = 1;
  for (int k = 0;; ++k) {
    const auto d = w.scaled(k);
    if (!d.fits(bound)) {
      break;
    }
    if (k > 0) {
      // C(e+k-1, k) = C(e+k-2, k-1) * (e+k-1) / k, exact at every step
      c = checked_mul(c, e + k - 1) / k;
    }
    out.add_term(d, c);
  }
  return out;
}

TBSeries expand(std::shared_ptr<const TildeBurnsideRing> ring, const FactoredSeries& f, const MultiDegree& bound) {
  if (f.arity() != bound.arity()) {
    throw MathError("expand: factored series arity differs from the bound");
  }
  auto out = TBSeries::one(ring, bound);
  for (const auto& factor : f.factors()) {
    out = series_mul(out, expand_binomial(ring, factor, bound));
  }
  return out;
}

ZSeries expand_integer(const std::vector<IntegerFactor>& factors, const MultiDegree& bound) {
  auto out = ZSeries::one(std::make_shared<const IntegerRing>(), bound);
  for (const auto& f : factors) {
    if (f.w.arity() != bound.arity()) {
      throw MathError("expand_integer: factor degree and bound have different arity");
    }
    out = series_mul(out, expand_binomial_integer(f.w, f.e, bound));
  }
  return out;
}

FactoredSeries factorize(const TBSeries& p) {
  const auto& ring = p.ring();
  const auto zero = MultiDegree::zero(p.arity());
  if (!(p.coefficient(zero) == ring.one())) {
    throw MathError("factorize: constant term is " + ring.render(p.coefficient(zero)) + ", not 1");
  }
  // Each step clears the least remaining degree, so the box size bounds the steps.
  std::int64_t steps_left = 1;
  for (int b : p.bound().exponents) {
    steps_left = checked_mul(steps_left, static_cast<std::int64_t>(b) + 1);
  }
  std::vector<BinomialFactor> found;
  TBSeries residual = p;
  while (true) {
    if (steps_left-- == 0) {
      throw MathError("factorize: no convergence within the truncation box; residual " + series_to_text(residual));
    }
    const MultiDegree* w = nullptr;
    for (const auto& [d, c] : residual.terms()) {
      if (!d.is_zero() && (w == nullptr || graded_less(d, *w))) {
        w = &d;
      }
    }
    if (w == nullptr) {
      break;
    }
    const MultiDegree degree = *w;
    const TBElement coeff = residual.coefficient(degree);
    auto correction = TBSeries::one(p.ring_ptr(), p.bound());
    for (const auto& [id, s] : coeff.terms()) {
      BinomialFactor f{degree, s, TBClass{id}};
      correction = series_mul(correction, expand_binomial(p.ring_ptr(), BinomialFactor{degree, -s, TBClass{id}},
                                                          p.bound()));
      found.push_back(std::move(f));
    }
    residual = series_mul(residual, correction);
    if (!ring.is_zero(residual.coefficient(degree))) {
      throw MathError("factorize: residual did not vanish at degree " + monomial_string(degree) + ": " +
                      ring.render(residual.coefficient(degree)));
    }
  }
  return FactoredSeries(p.arity(), std::move(found));
}

// ---------------------------------------------------------------- factored io

std::string factored_to_text(const TildeBurnsideRing& ring, const FactoredSeries& f) {
  if (f.empty()) {
    return "1";
  }
  std::string out;
  for (const auto& factor : f.factors()) {
    if (!out.empty()) {
      out += " * ";
    }
    const std::int64_t mag = factor.s < 0 ? -factor.s : factor.s;
    out += "(1 - " + monomial_string(factor.w) + ")^{";
    out += factor.s > 0 ? "-" : "";
    out += mag == 1 ? "" : std::to_string(mag);
    out += ring.class_name(factor.cls) + "}";
  }
  return out;
}

FactoredSeries factored_from_text(const TildeBurnsideRing& ring, std::string_view raw, int arity) {
  const std::string text = detail::strip_spaces(raw);
  std::vector<BinomialFactor> factors;
  if (text == "1") {
    return FactoredSeries(arity);
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (!factors.empty()) {
      if (text[pos] != '*') {
        throw ParseError("expected '*' between factors at position " + std::to_string(pos) + " of '" + text + "'");
      }
      ++pos;
    }
    if (text.compare(pos, 3, "(1-") != 0) {
      throw ParseError("expected '(1 - ' at position " + std::to_string(pos) + " of '" + text + "'");
    }
    pos += 3;
    const auto close = text.find(')', pos);
    if (close == std::string::npos || text.compare(close, 3, ")^{") != 0) {
      throw ParseError("expected ')^{' in '" + text + "'");
    }
    const MultiDegree w = parse_monomial(text.substr(pos, close - pos), arity);
    pos = close + 3;
    int depth = 1;
    std::size_t end = pos;
    for (; end < text.size() && depth > 0; ++end) {
      depth += text[end] == '{' ? 1 : (text[end] == '}' ? -1 : 0);
    }
    if (depth != 0) {
      throw ParseError("unterminated exponent in '" + text + "'");
    }
    const auto terms = detail::parse_terms(text.substr(pos, end - 1 - pos));
    for (const auto& [name, c] : terms) {
      if (!is_integral(c)) {
        throw ParseError("non-integral factor exponent in '" + text + "'");
      }
      const TBClass cls = name.empty() ? ring.unit_class() : ring.parse_class(name);
      factors.push_back(BinomialFactor{w, -c.numerator(), cls});
    }
    pos = end;
  }
  return FactoredSeries(arity, std::move(factors));
}

nlohmann::json factored_to_json(const TildeBurnsideRing& ring, const FactoredSeries& f) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& factor : f.factors()) {
    factors.push_back({{"w", factor.w.exponents}, {"s", factor.s}, {"class", ring.class_name(factor.cls)}});
  }
  return {{"arity", f.arity()}, {"factors", factors}};
}

FactoredSeries factored_from_json(const TildeBurnsideRing& ring, const nlohmann::json& j) {
  try {
    const int arity = j.at("arity").get<int>();
    std::vector<BinomialFactor> factors;
    for (const auto& f : j.at("factors")) {
      factors.push_back(BinomialFactor{MultiDegree(f.at("w").get<std::vector<int>>()), f.at("s").get<std::int64_t>(),
                                       ring.parse_class(f.at("class").get<std::string>())});
    }
    return FactoredSeries(arity, std::move(factors));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("factored series: ") + e.what());
  }
}

}  // namespace eqps
