#include "eqps/invariants.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"
#include "eqps/kernels.hpp"
#include "linear_text.hpp"

namespace eqps {

// ---------------------------------------------------------------- FactoredZeta

FactoredZeta::FactoredZeta(Variant v, std::vector<ZetaFactor> factors) : variant_(v) {
  for (const auto& f : factors) {
    if (f.n <= 0) {
      throw MathError("zeta factor exponent " + to_string(f.n) + " is not positive");
    }
    if (v == Variant::ZetaTilde && !is_integral(f.n)) {
      throw MathError("zeta-tilde factor exponent " + to_string(f.n) + " is not an integer");
    }
  }
  std::sort(factors.begin(), factors.end(), [](const ZetaFactor& a, const ZetaFactor& b) {
    return a.n != b.n ? a.n < b.n : a.base < b.base;
  });
  for (const auto& f : factors) {
    if (!factors_.empty() && factors_.back().n == f.n && factors_.back().base == f.base) {
      factors_.back().q += f.q;
      if (factors_.back().q == 0) {
        factors_.pop_back();
      }
    } else if (f.q != 0) {
      factors_.push_back(f);
    }
  }
}

std::string variant_name(FactoredZeta::Variant v) { return v == FactoredZeta::Variant::Zeta ? "zeta" : "zeta-tilde"; }

std::string zeta_to_text(const BurnsideRing& burnside, const FactoredZeta& z) {
  if (z.empty()) {
    return "1";
  }
  std::string out;
  for (const auto& f : z.factors()) {
    if (!out.empty()) {
      out += " * ";
    }
    std::string power = "t";
    if (f.n != 1) {
      power += is_integral(f.n) ? "^" + to_string(f.n) : "^{" + to_string(f.n) + "}";
    }
    const Rational mag = f.q < 0 ? -f.q : f.q;
    std::string coeff;
    if (mag != 1) {
      coeff = is_integral(mag) ? to_string(mag) : "(" + to_string(mag) + ")";
    }
    out += "(1 - " + power + ")^{" + (f.q > 0 ? "-" : "") + coeff + burnside.class_name(f.base) + "}";
  }
  return out;
}

FactoredZeta zeta_from_text(const BurnsideRing& burnside, FactoredZeta::Variant v, std::string_view raw) {
  const std::string text = detail::strip_spaces(raw);
  if (text == "1") {
    return FactoredZeta(v);
  }
  std::vector<ZetaFactor> factors;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (!factors.empty()) {
      if (text[pos] != '*') {
        throw ParseError("expected '*' between zeta factors in '" + text + "'");
      }
      ++pos;
    }
    if (text.compare(pos, 4, "(1-t") != 0) {
      throw ParseError("expected '(1 - t' at position " + std::to_string(pos) + " of '" + text + "'");
    }
    pos += 4;
    const auto close = text.find(")^{", pos);
    if (close == std::string::npos) {
      throw ParseError("expected ')^{' in '" + text + "'");
    }
    std::string power = text.substr(pos, close - pos);
    Rational n(1);
    if (!power.empty()) {
      if (power[0] != '^') {
        throw ParseError("bad power of t in '" + text + "'");
      }
      power.erase(0, 1);
      if (power.size() >= 2 && power.front() == '{' && power.back() == '}') {
        power = power.substr(1, power.size() - 2);
      }
      n = parse_rational(power);
    }
    pos = close + 3;
    int depth = 1;
    std::size_t end = pos;
    for (; end < text.size() && depth > 0; ++end) {
      depth += text[end] == '{' ? 1 : (text[end] == '}' ? -1 : 0);
    }
    if (depth != 0) {
      throw ParseError("unterminated exponent in '" + text + "'");
    }
    for (const auto& [name, c] : detail::parse_terms(text.substr(pos, end - 1 - pos))) {
      const int base = name.empty() ? burnside.catalog().whole_class() : burnside.parse_class(name);
      factors.push_back(ZetaFactor{n, -c, base});
    }
    pos = end;
  }
  return FactoredZeta(v, std::move(factors));
}

nlohmann::json zeta_to_json(const BurnsideRing& burnside, const FactoredZeta& z) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : z.factors()) {
    factors.push_back({{"n", to_string(f.n)}, {"q", to_string(f.q)}, {"base", burnside.class_name(f.base)}});
  }
  return {{"variant", variant_name(z.variant())}, {"factors", factors}, {"text", zeta_to_text(burnside, z)}};
}

FactoredZeta zeta_from_json(const BurnsideRing& burnside, const nlohmann::json& j) {
  try {
    const auto name = j.at("variant").get<std::string>();
    FactoredZeta::Variant v;
    if (name == "zeta") {
      v = FactoredZeta::Variant::Zeta;
    } else if (name == "zeta-tilde") {
      v = FactoredZeta::Variant::ZetaTilde;
    } else {
      throw ParseError("unknown zeta variant '" + name + "'");
    }
    std::vector<ZetaFactor> factors;
    for (const auto& f : j.at("factors")) {
      factors.push_back(ZetaFactor{parse_rational(f.at("n").get<std::string>()),
                                   parse_rational(f.at("q").get<std::string>()),
                                   burnside.parse_class(f.at("base").get<std::string>())});
    }
    return FactoredZeta(v, std::move(factors));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("zeta: ") + e.what());
  }
}

// ---------------------------------------------------------------- from resolution

PoincareResult poincare_from_resolution(const ResolutionData& res, const MultiDegree& bound) {
  require_valid(res);
  if (bound.arity() != res.r) {
    throw MathError("bound has " + std::to_string(bound.arity()) + " components, the resolution has r = " +
                    std::to_string(res.r));
  }
  const auto m = multiplicity_matrix(res.graph);
  PoincareResult out{FactoredSeries(res.r), TBSeries(res.ring, bound), {}};
  std::vector<BinomialFactor> factors;
  for (const auto& s : res.strata) {
    StratumData d{s.id, omega_vector(res, m, s), n_value(res, m, s), res.ring->class_of(s.isotropy, *s.character)};
    if (s.chi != 0) {
      if (d.omega.is_zero()) {
        throw MathError("stratum " + s.id + ": omega is zero but chi = " + std::to_string(s.chi));
      }
      factors.push_back(BinomialFactor{d.omega, s.chi, d.cls});
    }
    out.strata.push_back(std::move(d));
  }
  out.factored = FactoredSeries(res.r, std::move(factors));
  out.expansion = expand_parallel(res.ring, out.factored, bound);
  return out;
}

ZetaPair zeta_from_resolution(const ResolutionData& res) {
  require_valid(res);
  const auto m = multiplicity_matrix(res.graph);
  const auto& catalog = res.ring->catalog();
  std::vector<ZetaFactor> zeta;
  std::vector<ZetaFactor> tilde;
  for (const auto& s : res.strata) {
    if (s.chi == 0) {
      continue;
    }
    const std::int64_t n = n_value(res, m, s);
    const Rational ratio(s.slice_isotropy.order(), s.isotropy.order());
    const int base = catalog.class_of(s.slice_isotropy);
    zeta.push_back(ZetaFactor{Rational(n), ratio * Rational(s.chi), base});
    const Rational nt = Rational(n) * ratio;
    if (!is_integral(nt)) {
      throw MathError("stratum " + s.id + ": zeta-tilde exponent n*|Hhat|/|H| = " + to_string(nt) +
                      " is not an integer");
    }
    tilde.push_back(ZetaFactor{nt, Rational(s.chi), base});
  }
  return ZetaPair{FactoredZeta(FactoredZeta::Variant::Zeta, std::move(zeta)),
                  FactoredZeta(FactoredZeta::Variant::ZetaTilde, std::move(tilde))};
}

// ---------------------------------------------------------------- recovery

RecoveryMode parse_recovery_mode(std::string_view text) {
  if (text == "free") {
    return RecoveryMode::Free;
  }
  if (text == "general") {
    return RecoveryMode::General;
  }
  throw ParseError("unknown recovery mode '" + std::string(text) + "' (expected free or general)");
}

namespace {

Rational integral_exponent(std::int64_t num, std::int64_t den, const std::string& what) {
  const Rational q(num, den);
  if (!is_integral(q)) {
    throw MathError(what + ": " + std::to_string(num) + "/" + std::to_string(den) +
                    " is not an integer, so the series is not an equivariant Poincare series for this group");
  }
  return q;
}

void free_rule(const TildeBurnsideRing& ring, const BinomialFactor& f, std::vector<ZetaFactor>& zeta,
               std::vector<ZetaFactor>& tilde) {
  const std::int64_t g = ring.group().order();
  const std::int64_t h = ring.subgroup(f.cls).order();
  const std::int64_t total = f.w.total();
  const int e = ring.catalog().trivial_class();
  const std::string where = "factor at " + monomial_string(f.w);
  zeta.push_back(ZetaFactor{integral_exponent(total, g, where + ", |w|/|G|"), Rational(f.s, h), e});
  tilde.push_back(ZetaFactor{integral_exponent(total, g * h, where + ", |w|/(|G||H|)"), Rational(f.s), e});
}

/// Index of the graded-minimal factor among `candidates`; equal degrees are
/// resolved by class id, distinct degrees of equal total degree are an error.
std::size_t select_minimal(const TildeBurnsideRing& ring, const std::vector<BinomialFactor>& factors,
                           const std::vector<std::size_t>& candidates) {
  std::size_t best = candidates.front();
  for (std::size_t i : candidates) {
    const auto& f = factors[i];
    const auto& b = factors[best];
    if (graded_less(f.w, b.w) || (f.w == b.w && f.cls < b.cls)) {
      best = i;
    }
  }
  for (std::size_t i : candidates) {
    const auto& f = factors[i];
    const auto& b = factors[best];
    if (f.w != b.w && f.w.total() == b.w.total()) {
      throw MathError("ambiguous minimal factor: " + monomial_string(b.w) + " and " + monomial_string(f.w) +
                      " are incomparable candidates for " + ring.class_name(b.cls) + " / " +
                      ring.class_name(f.cls));
    }
  }
  return best;
}

}  // namespace

RecoveryResult recover_zeta(const TildeBurnsideRing& ring, const FactoredSeries& p, RecoveryMode mode) {
  const auto& catalog = ring.catalog();
  const auto& burnside = ring.burnside();
  const auto& factors = p.factors();
  RecoveryResult out;

  auto all_free = [&] {
    std::vector<ZetaFactor> zeta;
    std::vector<ZetaFactor> tilde;
    for (const auto& f : factors) {
      free_rule(ring, f, zeta, tilde);
    }
    return ZetaPair{FactoredZeta(FactoredZeta::Variant::Zeta, std::move(zeta)),
                    FactoredZeta(FactoredZeta::Variant::ZetaTilde, std::move(tilde))};
  };

  if (mode == RecoveryMode::Free) {
    out.zetas = all_free();
    return out;
  }

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const int k = ring.info(factors[i].cls).subgroup_class;
    if (k != catalog.trivial_class()) {
      by_class[k].push_back(i);
    }
  }

  std::vector<bool> consumed(factors.size(), false);
  std::vector<ZetaFactor> zeta;
  std::vector<ZetaFactor> tilde;
  const std::int64_t g = ring.group().order();

  for (const auto& [k, members] : by_class) {
    const std::string kname = burnside.class_name(k);
    std::vector<std::size_t> positive;
    for (std::size_t i : members) {
      if (factors[i].s > 0) {
        positive.push_back(i);
      }
    }
    if (positive.empty()) {
      continue;
    }
    const std::size_t first = select_minimal(ring, factors, positive);
    const auto& f1 = factors[first];
    if (f1.s != 1) {
      throw MathError("exceptional factor (1 - " + monomial_string(f1.w) + ")^{-" + std::to_string(f1.s) +
                      ring.class_name(f1.cls) + "} has s = " + std::to_string(f1.s) + ", expected 1");
    }
    std::vector<std::size_t> others;
    for (std::size_t i : positive) {
      if (factors[i].cls != f1.cls) {
        others.push_back(i);
      }
    }
    if (others.empty()) {
      if (k == catalog.whole_class()) {
        out.warnings.push_back(
            "scalar-action fallback: every " + kname + " factor carries the same character " +
            ring.class_name(f1.cls) + ", so the action is treated as scalar (free off the origin) and all factors "
            "are mapped by the free rule. The general-mode hypothesis (no smooth component of the curve invariant "
            "under a non-scalar element) cannot be verified from the series alone; different actions can share "
            "this Poincare series and have different zeta functions.");
        out.selections.push_back("class " + kname + ": single character " + ring.class_name(f1.cls) + " at " +
                                 monomial_string(f1.w) + ", scalar fallback");
        out.zetas = all_free();
        return out;
      }
      out.warnings.push_back("class " + kname + ": no factor with a second character; its factors are mapped by "
                             "the free rule");
      out.selections.push_back("class " + kname + ": single character " + ring.class_name(f1.cls) + " at " +
                               monomial_string(f1.w) + ", free rule");
      continue;
    }
    const std::size_t second = select_minimal(ring, factors, others);
    const auto& f2 = factors[second];
    if (f2.s != 1) {
      throw MathError("second exceptional factor (1 - " + monomial_string(f2.w) + ")^{-" + std::to_string(f2.s) +
                      ring.class_name(f2.cls) + "} has s = " + std::to_string(f2.s) + ", expected 1");
    }
    consumed[first] = true;
    consumed[second] = true;

    const std::int64_t korder = catalog.representative(k).order();
    const auto ker_alpha = kernel(ring.group(), ring.character(f1.cls));
    const auto ker_beta = kernel(ring.group(), ring.character(f2.cls));
    const int ka = catalog.class_of(ker_alpha);
    const int kb = catalog.class_of(ker_beta);
    const std::int64_t t1 = f1.w.total();
    const std::int64_t t2 = f2.w.total();
    const std::string w1 = "exceptional factor at " + monomial_string(f1.w);
    const std::string w2 = "exceptional factor at " + monomial_string(f2.w);

    zeta.push_back(ZetaFactor{integral_exponent(t1, g, w1 + ", |w|/|G|"), Rational(ker_beta.order(), korder), kb});
    zeta.push_back(ZetaFactor{integral_exponent(t2, g, w2 + ", |w|/|G|"), Rational(ker_alpha.order(), korder), ka});
    tilde.push_back(ZetaFactor{integral_exponent(t1 * ker_beta.order(), g * korder, w1 + ", |w||Ker beta|/(|G||K|)"),
                               Rational(1), kb});
    tilde.push_back(ZetaFactor{integral_exponent(t2 * ker_alpha.order(), g * korder, w2 + ", |w||Ker alpha|/(|G||K|)"),
                               Rational(1), ka});
    out.selections.push_back("class " + kname + ": alpha = " + ring.class_name(f1.cls) + " at " +
                             monomial_string(f1.w) + ", beta = " + ring.class_name(f2.cls) + " at " +
                             monomial_string(f2.w) + "; Ker alpha in " + burnside.class_name(ka) +
                             ", Ker beta in " + burnside.class_name(kb));
  }

  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!consumed[i]) {
      free_rule(ring, factors[i], zeta, tilde);
    }
  }
  out.zetas = ZetaPair{FactoredZeta(FactoredZeta::Variant::Zeta, std::move(zeta)),
                       FactoredZeta(FactoredZeta::Variant::ZetaTilde, std::move(tilde))};
  return out;
}

// ---------------------------------------------------------------- reductions

bool statement1_rhohat_check(const std::shared_ptr<const TildeBurnsideRing>& ring, const FactoredSeries& p,
                             const std::vector<IntegerFactor>& nonequivariant, int nonequivariant_arity,
                             const MultiDegree& bound) {
  const int g = ring->group().order();
  const int r = bound.arity();
  if (p.arity() != r) {
    throw MathError("statement1 check: series arity " + std::to_string(p.arity()) + " differs from bound arity " +
                    std::to_string(r));
  }
  if (nonequivariant_arity != g * r) {
    throw MathError("statement1 check: non-equivariant series has arity " + std::to_string(nonequivariant_arity) +
                    ", expected |G|*r = " + std::to_string(g * r));
  }
  const auto lhs = reduce_rhohat(expand(ring, p, bound));

  MultiDegree source_bound = MultiDegree::zero(g * r);
  std::vector<MultiDegree> images;
  for (int i = 0; i < r; ++i) {
    for (int b = 0; b < g; ++b) {
      source_bound.exponents[static_cast<std::size_t>(i * g + b)] = bound[i];
      MultiDegree e = MultiDegree::zero(r);
      e.exponents[static_cast<std::size_t>(i)] = 1;
      images.push_back(std::move(e));
    }
  }
  const auto rhs = substitute_monomial(expand_integer(nonequivariant, source_bound), images, bound);
  return lhs == rhs;
}

R1Series eps_reduction(const std::shared_ptr<const TildeBurnsideRing>& ring, const FactoredSeries& p,
                       const MultiDegree& bound) {
  return reduce_eps(expand(ring, p, bound));
}

}  // namespace eqps
