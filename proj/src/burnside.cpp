#include "eqps/burnside.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"
#include "linear_text.hpp"

namespace eqps {

namespace {

int mod(long long v, int n) {
  long long r = v % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

std::int64_t require_integral(const Rational& q, std::string_view text) {
  if (!is_integral(q)) {
    throw ParseError("non-integral coefficient in '" + std::string(text) + "'");
  }
  return q.numerator();
}

/// Calls visit(counts) for every count vector of length n summing to k.
void for_each_multiset(int n, int k, const std::function<void(const std::vector<std::uint8_t>&)>& visit) {
  std::vector<std::uint8_t> counts(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      counts[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(left);
      visit(counts);
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(c);
      rec(pos + 1, left - c);
    }
  };
  rec(0, k);
}

}  // namespace

std::string ring_tag(RingKind kind) {
  switch (kind) {
    case RingKind::TildeBurnside:
      return "tildeA";
    case RingKind::BurnsideQ:
      return "AQ";
    case RingKind::R1:
      return "R1";
    case RingKind::Integer:
      return "Z";
  }
  return "?";
}

RingKind parse_ring_tag(std::string_view tag) {
  if (tag == "tildeA") {
    return RingKind::TildeBurnside;
  }
  if (tag == "AQ") {
    return RingKind::BurnsideQ;
  }
  if (tag == "R1") {
    return RingKind::R1;
  }
  if (tag == "Z") {
    return RingKind::Integer;
  }
  throw ParseError("unknown ring tag '" + std::string(tag) + "' (expected tildeA, AQ, R1 or Z)");
}

std::string describe_character(const FiniteGroup& g, const CharacterQZ& chi) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < chi.domain.elements.size(); ++i) {
    out << (i ? ", " : "") << g.label(chi.domain.elements[i]) << ": "
        << to_string(Rational(chi.values[i], g.order()));
  }
  out << '}';
  return out.str();
}

// ---------------------------------------------------------------- equipped sets

SubgroupRef EquippedGSet::isotropy(const FiniteGroup& g, int x) const {
  SubgroupRef out;
  for (Element a = 0; a < g.order(); ++a) {
    if (act(a, x) == x) {
      out.elements.push_back(a);
    }
  }
  return out;
}

void validate_equipped(const FiniteGroup& g, const EquippedGSet& x) {
  const int n = g.order();
  if (x.size < 0 || static_cast<int>(x.action.size()) != n * x.size ||
      static_cast<int>(x.characters.size()) != x.size) {
    throw ValidationError("equipped set: action or character table has the wrong size");
  }
  for (Element a = 0; a < n; ++a) {
    for (int p = 0; p < x.size; ++p) {
      const int y = x.act(a, p);
      if (y < 0 || y >= x.size) {
        throw ValidationError("equipped set: element " + std::to_string(a) + " sends point " + std::to_string(p) +
                              " outside the set");
      }
    }
  }
  for (int p = 0; p < x.size; ++p) {
    if (x.act(0, p) != p) {
      throw ValidationError("equipped set: identity moves point " + std::to_string(p));
    }
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        if (x.act(g.mul(a, b), p) != x.act(a, x.act(b, p))) {
          throw ValidationError("equipped set: not an action at (" + std::to_string(a) + "*" + std::to_string(b) +
                                ", point " + std::to_string(p) + ")");
        }
      }
    }
  }
  for (int p = 0; p < x.size; ++p) {
    const auto& chi = x.characters[static_cast<std::size_t>(p)];
    if (chi.domain != x.isotropy(g, p)) {
      throw ValidationError("equipped set: character at point " + std::to_string(p) +
                            " is not defined on its isotropy subgroup");
    }
    if (!is_character(g, chi)) {
      throw ValidationError("equipped set: character at point " + std::to_string(p) + " is not a homomorphism");
    }
  }
  for (Element a = 0; a < n; ++a) {
    const Element ainv = g.inv(a);
    for (int p = 0; p < x.size; ++p) {
      const int q = x.act(a, p);
      const auto& chi_q = x.characters[static_cast<std::size_t>(q)];
      const auto& chi_p = x.characters[static_cast<std::size_t>(p)];
      for (Element b : chi_q.domain.elements) {
        if (chi_q.at(b) != chi_p.at(g.conj(ainv, b))) {
          throw ValidationError("equipped set: characters incompatible with the action (element " +
                                std::to_string(a) + ", point " + std::to_string(p) + ")");
        }
      }
    }
  }
}

EquippedGSet disjoint_union(const EquippedGSet& x, const EquippedGSet& y) {
  if (x.size == 0) {
    return y;
  }
  if (y.size == 0) {
    return x;
  }
  const int n = static_cast<int>(x.action.size()) / x.size;
  EquippedGSet out;
  out.size = x.size + y.size;
  out.action.resize(static_cast<std::size_t>(n * out.size));
  for (Element a = 0; a < n; ++a) {
    for (int p = 0; p < x.size; ++p) {
      out.action[static_cast<std::size_t>(a * out.size + p)] = x.act(a, p);
    }
    for (int p = 0; p < y.size; ++p) {
      out.action[static_cast<std::size_t>(a * out.size + x.size + p)] = x.size + y.act(a, p);
    }
  }
  out.characters = x.characters;
  out.characters.insert(out.characters.end(), y.characters.begin(), y.characters.end());
  return out;
}

EquippedGSet cartesian_product(const FiniteGroup& g, const EquippedGSet& x, const EquippedGSet& y) {
  const int n = g.order();
  EquippedGSet out;
  out.size = x.size * y.size;
  out.action.resize(static_cast<std::size_t>(n * out.size));
  for (Element a = 0; a < n; ++a) {
    for (int p = 0; p < x.size; ++p) {
      for (int q = 0; q < y.size; ++q) {
        out.action[static_cast<std::size_t>(a * out.size + p * y.size + q)] = x.act(a, p) * y.size + y.act(a, q);
      }
    }
  }
  out.characters.reserve(static_cast<std::size_t>(out.size));
  for (int p = 0; p < x.size; ++p) {
    const auto& cx = x.characters[static_cast<std::size_t>(p)];
    for (int q = 0; q < y.size; ++q) {
      const auto& cy = y.characters[static_cast<std::size_t>(q)];
      CharacterQZ chi;
      for (Element b : cx.domain.elements) {
        if (cy.domain.contains(b)) {
          chi.domain.elements.push_back(b);
          chi.values.push_back(mod(cx.at(b) + cy.at(b), n));
        }
      }
      out.characters.push_back(std::move(chi));
    }
  }
  return out;
}

EquippedGSet relabel(const FiniteGroup& g, const EquippedGSet& x, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != x.size) {
    throw ValidationError("relabel: permutation has the wrong length");
  }
  std::vector<int> inv(perm.size(), -1);
  for (std::size_t p = 0; p < perm.size(); ++p) {
    inv[static_cast<std::size_t>(perm[p])] = static_cast<int>(p);
  }
  EquippedGSet out;
  out.size = x.size;
  out.action.resize(x.action.size());
  for (Element a = 0; a < g.order(); ++a) {
    for (int p = 0; p < x.size; ++p) {
      out.action[static_cast<std::size_t>(a * x.size + p)] =
          inv[static_cast<std::size_t>(x.act(a, perm[static_cast<std::size_t>(p)]))];
    }
  }
  for (int p : perm) {
    out.characters.push_back(x.characters[static_cast<std::size_t>(p)]);
  }
  return out;
}

// ---------------------------------------------------------------- A(G)

BurnsideRing::BurnsideRing(std::shared_ptr<const GroupCatalog> catalog) : catalog_(std::move(catalog)) {
  const auto& g = catalog_->group();
  const int m = catalog_->class_count();
  marks_.assign(static_cast<std::size_t>(m), std::vector<std::int64_t>(static_cast<std::size_t>(m), 0));
  for (int c = 0; c < m; ++c) {
    const auto& hc = catalog_->representative(c);
    for (int d = 0; d < m; ++d) {
      const auto& hd = catalog_->representative(d);
      if (hc.order() > hd.order() || hd.order() % hc.order() != 0) {
        continue;
      }
      // cosets aH_d fixed by H_c  <=>  a^{-1} H_c a ⊆ H_d
      std::int64_t count = 0;
      for (Element a = 0; a < g.order(); ++a) {
        const Element ainv = g.inv(a);
        const bool inside = std::all_of(hc.elements.begin(), hc.elements.end(),
                                        [&](Element h) { return hd.contains(g.conj(ainv, h)); });
        count += inside ? 1 : 0;
      }
      marks_[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] = count / hd.order();
    }
  }
}

BurnsideElement BurnsideRing::one() const { return BurnsideElement::basis(catalog_->whole_class()); }

std::vector<std::int64_t> BurnsideRing::mark_vector(const BurnsideElement& a) const {
  const int m = catalog_->class_count();
  std::vector<std::int64_t> out(static_cast<std::size_t>(m), 0);
  for (int c = 0; c < m; ++c) {
    for (const auto& [d, coeff] : a.terms()) {
      out[static_cast<std::size_t>(c)] =
          checked_add(out[static_cast<std::size_t>(c)], checked_mul(coeff, marks(c, d)));
    }
  }
  return out;
}

namespace {

// The marks matrix is upper triangular in the (order, representative) class
// order: H_c can only be subconjugate to H_d if |H_c| <= |H_d|, with equality
// only inside one class.
template <class Coeff>
std::vector<Coeff> solve_marks(const std::vector<std::vector<std::int64_t>>& marks, std::vector<Coeff> phi) {
  const int m = static_cast<int>(phi.size());
  std::vector<Coeff> coeffs(static_cast<std::size_t>(m), Coeff(0));
  for (int c = m - 1; c >= 0; --c) {
    Coeff rest = phi[static_cast<std::size_t>(c)];
    for (int d = c + 1; d < m; ++d) {
      rest = checked_add(rest, checked_neg(checked_mul(coeffs[static_cast<std::size_t>(d)],
                                                        Coeff(marks[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)]))));
    }
    const Coeff diag(marks[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]);
    if constexpr (std::is_same_v<Coeff, std::int64_t>) {
      if (rest % diag != 0) {
        throw MathError("table of marks: non-integral Burnside coefficient");
      }
      coeffs[static_cast<std::size_t>(c)] = rest / diag;
    } else {
      coeffs[static_cast<std::size_t>(c)] = rest / diag;
    }
  }
  return coeffs;
}

template <class Coeff, class Elem>
std::vector<Coeff> marks_of(const std::vector<std::vector<std::int64_t>>& marks, const Elem& a) {
  const std::size_t m = marks.size();
  std::vector<Coeff> out(m, Coeff(0));
  for (std::size_t c = 0; c < m; ++c) {
    for (const auto& [d, coeff] : a.terms()) {
      out[c] = checked_add(out[c], checked_mul(coeff, Coeff(marks[c][static_cast<std::size_t>(d)])));
    }
  }
  return out;
}

}  // namespace

BurnsideElement BurnsideRing::mul(const BurnsideElement& a, const BurnsideElement& b) const {
  auto pa = marks_of<std::int64_t>(marks_, a);
  const auto pb = marks_of<std::int64_t>(marks_, b);
  for (std::size_t c = 0; c < pa.size(); ++c) {
    pa[c] = checked_mul(pa[c], pb[c]);
  }
  return BurnsideElement::from_dense(solve_marks(marks_, std::move(pa)));
}

BurnsideQElement BurnsideRing::mul(const BurnsideQElement& a, const BurnsideQElement& b) const {
  auto pa = marks_of<Rational>(marks_, a);
  const auto pb = marks_of<Rational>(marks_, b);
  for (std::size_t c = 0; c < pa.size(); ++c) {
    pa[c] *= pb[c];
  }
  return BurnsideQElement::from_dense(solve_marks(marks_, std::move(pa)));
}

std::string BurnsideRing::class_name(int cls) const { return "[G/" + catalog_->class_name(cls) + "]"; }

int BurnsideRing::parse_class(std::string_view text) const {
  const std::string t = detail::strip_spaces(text);
  if (t.size() < 4 || t.substr(0, 3) != "[G/" || t.back() != ']') {
    throw ParseError("expected a Burnside class like [G/H1], got '" + t + "'");
  }
  return catalog_->parse_class_name(t.substr(3, t.size() - 4));
}

namespace {

template <class Elem, class NameFn>
std::string render_burnside(const Elem& a, int unit, NameFn name) {
  std::vector<detail::NamedTerm> terms;
  for (auto it = a.terms().rbegin(); it != a.terms().rend(); ++it) {
    terms.emplace_back(it->first == unit ? std::string() : name(it->first), Rational(it->second));
  }
  return detail::render_terms(terms);
}

}  // namespace

std::string BurnsideRing::render(const BurnsideElement& a) const {
  return render_burnside(a, catalog_->whole_class(), [this](int c) { return class_name(c); });
}

std::string BurnsideRing::render(const BurnsideQElement& a) const {
  return render_burnside(a, catalog_->whole_class(), [this](int c) { return class_name(c); });
}

BurnsideQElement BurnsideRing::parse_q(std::string_view text) const {
  BurnsideQElement out;
  for (const auto& [name, c] : detail::parse_terms(text)) {
    out.add_term(name.empty() ? catalog_->whole_class() : parse_class(name), c);
  }
  return out;
}

// ---------------------------------------------------------------- R1(G)

R1Ring::R1Ring(std::shared_ptr<const GroupCatalog> catalog) : catalog_(std::move(catalog)) {
  const auto& chars = catalog_->characters(catalog_->whole_class());
  const int n = catalog_->group().order();
  const int m = static_cast<int>(chars.size());
  sum_table_.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m), 0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      CharacterQZ sum{chars[static_cast<std::size_t>(i)].domain, {}};
      for (std::size_t e = 0; e < sum.domain.elements.size(); ++e) {
        sum.values.push_back(
            mod(chars[static_cast<std::size_t>(i)].values[e] + chars[static_cast<std::size_t>(j)].values[e], n));
      }
      sum_table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          catalog_->character_index(catalog_->whole_class(), sum);
    }
  }
}

int R1Ring::character_count() const {
  return static_cast<int>(catalog_->characters(catalog_->whole_class()).size());
}

const CharacterQZ& R1Ring::character(int index) const {
  return catalog_->characters(catalog_->whole_class())[static_cast<std::size_t>(index)];
}

R1Element R1Ring::mul(const R1Element& a, const R1Element& b) const {
  std::vector<std::int64_t> dense(static_cast<std::size_t>(character_count()), 0);
  for (const auto& [i, x] : a.terms()) {
    for (const auto& [j, y] : b.terms()) {
      auto& slot = dense[static_cast<std::size_t>(sum_table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])];
      slot = checked_add(slot, checked_mul(x, y));
    }
  }
  return R1Element::from_dense(dense);
}

std::string R1Ring::basis_name(int index) const { return index == 0 ? "1" : "[a" + std::to_string(index) + "]"; }

std::string R1Ring::render(const R1Element& a) const {
  std::vector<detail::NamedTerm> terms;
  for (const auto& [i, c] : a.terms()) {
    terms.emplace_back(i == 0 ? std::string() : basis_name(i), Rational(c));
  }
  return detail::render_terms(terms);
}

R1Element R1Ring::parse(std::string_view text) const {
  R1Element out;
  for (const auto& [name, c] : detail::parse_terms(text)) {
    int index = 0;
    if (!name.empty()) {
      if (name.size() < 4 || name.substr(0, 2) != "[a" || name.back() != ']') {
        throw ParseError("expected an R1 basis element like [a1], got '" + name + "'");
      }
      try {
        index = std::stoi(name.substr(2, name.size() - 3));
      } catch (const std::exception&) {
        throw ParseError("bad character index in '" + name + "'");
      }
      if (index < 0 || index >= character_count()) {
        throw ParseError("character index out of range in '" + name + "'");
      }
    }
    out.add_term(index, require_integral(c, text));
  }
  return out;
}

// ---------------------------------------------------------------- Ã(G)

TildeBurnsideRing::TildeBurnsideRing(std::shared_ptr<const GroupCatalog> catalog)
    : catalog_(std::move(catalog)),
      burnside_(std::make_shared<const BurnsideRing>(catalog_)),
      r1_(std::make_shared<const R1Ring>(catalog_)) {
  const auto& g = catalog_->group();
  for (int c = 0; c < catalog_->class_count(); ++c) {
    const auto& rep = catalog_->representative(c);
    const auto& chars = catalog_->characters(c);
    const auto norm = normalizer(g, rep);
    std::vector<int> ids(chars.size(), -1);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      int least = static_cast<int>(i);
      for (Element a : norm.elements) {
        least = std::min(least, catalog_->character_index(c, conjugate_character(g, a, chars[i])));
      }
      if (least == static_cast<int>(i)) {
        ids[i] = static_cast<int>(classes_.size());
        classes_.push_back(ClassInfo{c, static_cast<int>(i)});
      } else {
        ids[i] = ids[static_cast<std::size_t>(least)];
      }
    }
    class_id_.push_back(std::move(ids));
  }
  product_cache_.resize(classes_.size() * classes_.size());
}

std::shared_ptr<const TildeBurnsideRing> TildeBurnsideRing::create(FiniteGroup g) {
  return std::make_shared<const TildeBurnsideRing>(std::make_shared<const GroupCatalog>(std::move(g)));
}

const CharacterQZ& TildeBurnsideRing::character(TBClass c) const {
  const auto& i = info(c);
  return catalog_->characters(i.subgroup_class)[static_cast<std::size_t>(i.character)];
}

TBClass TildeBurnsideRing::class_of(const SubgroupRef& h, const CharacterQZ& alpha) const {
  const auto [cls, idx] = catalog_->transport(h, alpha);
  return class_at(cls, idx);
}

TBClass TildeBurnsideRing::class_at(int subgroup_class, int character_index) const {
  if (subgroup_class < 0 || subgroup_class >= catalog_->class_count() || character_index < 0 ||
      character_index >= static_cast<int>(class_id_[static_cast<std::size_t>(subgroup_class)].size())) {
    throw ValidationError("no such class (subgroup class " + std::to_string(subgroup_class) + ", character " +
                          std::to_string(character_index) + ")");
  }
  return TBClass{class_id_[static_cast<std::size_t>(subgroup_class)][static_cast<std::size_t>(character_index)]};
}

EquippedGSet TildeBurnsideRing::realize(TBClass c) const {
  const auto& g = group();
  const int n = g.order();
  const auto& h = subgroup(c);
  const auto& alpha = character(c);
  // Cosets aH in order of first appearance of a.
  std::vector<int> coset_of(static_cast<std::size_t>(n), -1);
  std::vector<Element> reps;
  for (Element a = 0; a < n; ++a) {
    if (coset_of[static_cast<std::size_t>(a)] >= 0) {
      continue;
    }
    const int id = static_cast<int>(reps.size());
    reps.push_back(a);
    for (Element x : h.elements) {
      coset_of[static_cast<std::size_t>(g.mul(a, x))] = id;
    }
  }
  EquippedGSet out;
  out.size = static_cast<int>(reps.size());
  out.action.resize(static_cast<std::size_t>(n * out.size));
  for (Element a = 0; a < n; ++a) {
    for (int p = 0; p < out.size; ++p) {
      out.action[static_cast<std::size_t>(a * out.size + p)] =
          coset_of[static_cast<std::size_t>(g.mul(a, reps[static_cast<std::size_t>(p)]))];
    }
  }
  for (Element r : reps) {
    out.characters.push_back(conjugate_character(g, r, alpha));
  }
  return out;
}

EquippedGSet TildeBurnsideRing::realize(const TBElement& a) const {
  EquippedGSet out;
  out.action.clear();
  for (const auto& [id, coeff] : a.terms()) {
    if (coeff < 0) {
      throw MathError("cannot realize an element with negative coefficients as an equipped set");
    }
    const auto piece = realize(TBClass{id});
    for (std::int64_t i = 0; i < coeff; ++i) {
      out = disjoint_union(out, piece);
    }
  }
  return out;
}

namespace {

struct OrbitScan {
  int size;
  std::vector<int> orbit_rep;  // first point of each orbit, in order
};

OrbitScan scan_orbits(const FiniteGroup& g, const EquippedGSet& x) {
  OrbitScan out{x.size, {}};
  std::vector<bool> seen(static_cast<std::size_t>(x.size), false);
  for (int p = 0; p < x.size; ++p) {
    if (seen[static_cast<std::size_t>(p)]) {
      continue;
    }
    out.orbit_rep.push_back(p);
    for (Element a = 0; a < g.order(); ++a) {
      seen[static_cast<std::size_t>(x.act(a, p))] = true;
    }
  }
  return out;
}

}  // namespace

TBElement TildeBurnsideRing::orbit_decompose(const EquippedGSet& x) const {
  validate_equipped(group(), x);
  std::vector<std::int64_t> dense(static_cast<std::size_t>(class_count()), 0);
  for (int p : scan_orbits(group(), x).orbit_rep) {
    const auto& chi = x.characters[static_cast<std::size_t>(p)];
    ++dense[static_cast<std::size_t>(class_of(chi.domain, chi).id)];
  }
  return TBElement::from_dense(dense);
}

const TBElement& TildeBurnsideRing::class_product(TBClass a, TBClass b) const {
  if (b < a) {
    std::swap(a, b);
  }
  const auto slot = static_cast<std::size_t>(a.id * class_count() + b.id);
  {
    std::shared_lock lock(cache_mutex_);
    if (product_cache_[slot]) {
      return *product_cache_[slot];
    }
  }
  const auto& g = group();
  const auto prod = cartesian_product(g, realize(a), realize(b));
  std::vector<std::int64_t> dense(static_cast<std::size_t>(class_count()), 0);
  for (int p : scan_orbits(g, prod).orbit_rep) {
    const auto& chi = prod.characters[static_cast<std::size_t>(p)];
    ++dense[static_cast<std::size_t>(class_of(chi.domain, chi).id)];
  }
  auto value = std::make_unique<TBElement>(TBElement::from_dense(dense));
  std::unique_lock lock(cache_mutex_);
  if (!product_cache_[slot]) {
    product_cache_[slot] = std::move(value);
  }
  return *product_cache_[slot];
}

TBElement TildeBurnsideRing::mul(const TBElement& a, const TBElement& b) const {
  std::vector<std::int64_t> dense(static_cast<std::size_t>(class_count()), 0);
  for (const auto& [i, x] : a.terms()) {
    for (const auto& [j, y] : b.terms()) {
      const std::int64_t xy = checked_mul(x, y);
      for (const auto& [k, z] : class_product(TBClass{i}, TBClass{j}).terms()) {
        dense[static_cast<std::size_t>(k)] = checked_add(dense[static_cast<std::size_t>(k)], checked_mul(xy, z));
      }
    }
  }
  return TBElement::from_dense(dense);
}

TBElement TildeBurnsideRing::symmetric_power(const EquippedGSet& x, int k) const {
  if (k < 0) {
    throw MathError("symmetric power with negative exponent");
  }
  if (k > 255) {
    throw MathError("symmetric power exponent above 255 is not supported");
  }
  if (k == 0) {
    return one();
  }
  if (x.size == 0) {
    return zero();
  }
  const auto& g = group();
  const int n = g.order();
  const int size = x.size;
  std::vector<std::int64_t> dense(static_cast<std::size_t>(class_count()), 0);
  std::vector<std::uint8_t> image(static_cast<std::size_t>(size));
  std::vector<bool> visited(static_cast<std::size_t>(size));

  // Each orbit is counted once, at its lexicographically least count vector.
  for_each_multiset(size, k, [&](const std::vector<std::uint8_t>& counts) {
    CharacterQZ chi;
    for (Element a = 0; a < n; ++a) {
      for (int y = 0; y < size; ++y) {
        image[static_cast<std::size_t>(x.act(a, y))] = counts[static_cast<std::size_t>(y)];
      }
      const int cmp = image < counts ? -1 : (image == counts ? 0 : 1);
      if (cmp < 0) {
        return;
      }
      if (cmp == 0) {
        chi.domain.elements.push_back(a);
      }
    }
    // Value at a: sum over cycles of a on the support of mu * alpha_y(a^len).
    for (Element a : chi.domain.elements) {
      std::fill(visited.begin(), visited.end(), false);
      long long value = 0;
      for (int y = 0; y < size; ++y) {
        const int mu = counts[static_cast<std::size_t>(y)];
        if (mu == 0 || visited[static_cast<std::size_t>(y)]) {
          continue;
        }
        int len = 0;
        for (int z = y; !visited[static_cast<std::size_t>(z)]; z = x.act(a, z)) {
          visited[static_cast<std::size_t>(z)] = true;
          ++len;
        }
        value += static_cast<long long>(mu) * x.characters[static_cast<std::size_t>(y)].at(g.pow(a, len));
      }
      chi.values.push_back(mod(value, n));
    }
    ++dense[static_cast<std::size_t>(class_of(chi.domain, chi).id)];
  });
  return TBElement::from_dense(dense);
}

const TBElement& TildeBurnsideRing::symmetric_power(TBClass c, int k) const {
  const auto key = std::make_pair(c.id, k);
  {
    std::shared_lock lock(cache_mutex_);
    const auto it = sympow_cache_.find(key);
    if (it != sympow_cache_.end()) {
      return *it->second;
    }
  }
  auto value = std::make_unique<TBElement>(symmetric_power(realize(c), k));
  std::unique_lock lock(cache_mutex_);
  const auto [it, inserted] = sympow_cache_.try_emplace(key, std::move(value));
  return *it->second;
}

BurnsideElement TildeBurnsideRing::rho(const TBElement& a) const {
  BurnsideElement out;
  for (const auto& [id, c] : a.terms()) {
    out.add_term(info(TBClass{id}).subgroup_class, c);
  }
  return out;
}

std::int64_t TildeBurnsideRing::rhohat(const TBElement& a) const {
  std::int64_t out = 0;
  for (const auto& [id, c] : a.terms()) {
    out = checked_add(out, checked_mul(c, group().order() / subgroup(TBClass{id}).order()));
  }
  return out;
}

R1Element TildeBurnsideRing::eps(const TBElement& a) const {
  R1Element out;
  for (const auto& [id, c] : a.terms()) {
    const auto& i = info(TBClass{id});
    if (i.subgroup_class == catalog_->whole_class()) {
      out.add_term(i.character, c);
    }
  }
  return out;
}

std::string TildeBurnsideRing::class_name(TBClass c) const {
  const auto& i = info(c);
  std::string out = "[G/" + catalog_->class_name(i.subgroup_class) + "]";
  if (i.character != 0) {
    out += "_{a" + std::to_string(i.character) + "}";
  }
  return out;
}

TBClass TildeBurnsideRing::parse_class(std::string_view text) const {
  const std::string t = detail::strip_spaces(text);
  const auto close = t.find(']');
  if (t.size() < 4 || t.substr(0, 3) != "[G/" || close == std::string::npos) {
    throw ParseError("expected a class like [G/H1]_{a1}, got '" + t + "'");
  }
  const int cls = catalog_->parse_class_name(t.substr(3, close - 3));
  const std::string rest = t.substr(close + 1);
  int idx = 0;
  if (!rest.empty()) {
    if (rest.size() < 5 || rest.substr(0, 3) != "_{a" || rest.back() != '}') {
      throw ParseError("bad character subscript in '" + t + "'");
    }
    const std::string digits = rest.substr(3, rest.size() - 4);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw ParseError("bad character index in '" + t + "'");
    }
    idx = std::stoi(digits);
  }
  if (idx >= static_cast<int>(catalog_->characters(cls).size())) {
    throw ParseError("character index out of range in '" + t + "'");
  }
  return class_at(cls, idx);
}

std::string TildeBurnsideRing::render(const TBElement& a) const {
  auto terms = a.terms();
  std::sort(terms.begin(), terms.end(), [this](const auto& x, const auto& y) {
    const auto& ix = info(TBClass{x.first});
    const auto& iy = info(TBClass{y.first});
    if (ix.subgroup_class != iy.subgroup_class) {
      return ix.subgroup_class > iy.subgroup_class;
    }
    return ix.character < iy.character;
  });
  const int unit = unit_class().id;
  std::vector<detail::NamedTerm> named;
  for (const auto& [id, c] : terms) {
    named.emplace_back(id == unit ? std::string() : class_name(TBClass{id}), Rational(c));
  }
  return detail::render_terms(named);
}

TBElement TildeBurnsideRing::parse(std::string_view text) const {
  TBElement out;
  for (const auto& [name, c] : detail::parse_terms(text)) {
    out.add_term(name.empty() ? unit_class().id : parse_class(name).id, require_integral(c, text));
  }
  return out;
}

nlohmann::json TildeBurnsideRing::to_json(const TBElement& a) const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [id, c] : a.terms()) {
    out[class_name(TBClass{id})] = c;
  }
  return out;
}

TBElement TildeBurnsideRing::from_json(const nlohmann::json& j) const {
  if (j.is_string()) {
    return parse(j.get<std::string>());
  }
  if (!j.is_object()) {
    throw ParseError("ring element must be a string or an object of class -> coefficient");
  }
  TBElement out;
  for (const auto& [name, c] : j.items()) {
    if (!c.is_number_integer()) {
      throw ParseError("coefficient of " + name + " is not an integer");
    }
    out.add_term(parse_class(name).id, c.get<std::int64_t>());
  }
  return out;
}

std::vector<std::string> TildeBurnsideRing::legend(const std::vector<TBClass>& classes) const {
  const auto& g = group();
  std::vector<TBClass> sorted = classes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::string> out;
  for (TBClass c : sorted) {
    const auto& h = subgroup(c);
    std::ostringstream line;
    line << class_name(c) << ": H = {";
    for (std::size_t i = 0; i < h.elements.size(); ++i) {
      line << (i ? ", " : "") << g.label(h.elements[i]);
    }
    line << "} (order " << h.order() << ")";
    if (info(c).character != 0) {
      line << ", alpha = " << describe_character(g, character(c));
    }
    out.push_back(line.str());
  }
  return out;
}

std::int64_t IntegerRing::parse(std::string_view text) const {
  const auto q = parse_rational(detail::strip_spaces(text));
  if (!is_integral(q)) {
    throw ParseError("not an integer: '" + std::string(text) + "'");
  }
  return q.numerator();
}

}  // namespace eqps
