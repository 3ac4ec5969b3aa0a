#include "eqps/group.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"

namespace eqps {

namespace {

int mod(long long v, int n) {
  long long r = v % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

std::string cycle_label(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::ostringstream out;
  bool any = false;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i] || perm[i] == static_cast<int>(i)) {
      continue;
    }
    out << '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      out << (first ? "" : " ") << j;
      first = false;
      j = static_cast<std::size_t>(perm[j]);
    }
    out << ')';
    any = true;
  }
  return any ? out.str() : "()";
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<Element>> table, std::vector<std::string> labels)
    : order_(static_cast<int>(table.size())) {
  if (order_ == 0) {
    throw ValidationError("group table is empty");
  }
  const int n = order_;
  table_.reserve(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a) {
    const auto& row = table[static_cast<std::size_t>(a)];
    if (static_cast<int>(row.size()) != n) {
      throw ValidationError("group table row " + std::to_string(a) + " has wrong length");
    }
    for (int b = 0; b < n; ++b) {
      const Element c = row[static_cast<std::size_t>(b)];
      if (c < 0 || c >= n) {
        throw ValidationError("group table is not closed: entry (" + std::to_string(a) + "," +
                              std::to_string(b) + ") = " + std::to_string(c));
      }
      table_.push_back(c);
    }
  }
  for (int a = 0; a < n; ++a) {
    if (mul(0, a) != a || mul(a, 0) != a) {
      throw ValidationError("element 0 is not a two-sided identity (fails at " + std::to_string(a) + ")");
    }
  }
  inverse_.assign(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (mul(a, b) == 0 && mul(b, a) == 0) {
        inverse_[static_cast<std::size_t>(a)] = b;
        break;
      }
    }
    if (inverse_[static_cast<std::size_t>(a)] < 0) {
      throw ValidationError("element " + std::to_string(a) + " has no two-sided inverse");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Element ab = mul(a, b);
      for (int c = 0; c < n; ++c) {
        if (mul(ab, c) != mul(a, mul(b, c))) {
          throw ValidationError("table is not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                                "," + std::to_string(c) + ")");
        }
      }
    }
  }
  elem_order_.resize(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    int k = 1;
    for (Element x = a; x != 0; x = mul(x, a)) {
      ++k;
    }
    elem_order_[static_cast<std::size_t>(a)] = k;
  }
  if (labels.empty()) {
    labels.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      labels[static_cast<std::size_t>(a)] = std::to_string(a);
    }
  } else if (static_cast<int>(labels.size()) != n) {
    throw ValidationError("label count does not match group order");
  }
  labels_ = std::move(labels);
}

Element FiniteGroup::pow(Element a, int k) const {
  const int o = element_order(a);
  k = mod(k, o);
  Element x = 0;
  for (int i = 0; i < k; ++i) {
    x = mul(x, a);
  }
  return x;
}

std::vector<std::vector<Element>> FiniteGroup::table() const {
  std::vector<std::vector<Element>> out(static_cast<std::size_t>(order_));
  for (int a = 0; a < order_; ++a) {
    out[static_cast<std::size_t>(a)].assign(table_.begin() + a * order_, table_.begin() + (a + 1) * order_);
  }
  return out;
}

FiniteGroup load_group(const nlohmann::json& desc, const GroupLoadOptions& options) {
  try {
    if (desc.contains("table")) {
      auto table = desc.at("table").get<std::vector<std::vector<Element>>>();
      if (desc.contains("order") && desc.at("order").get<std::size_t>() != table.size()) {
        throw ValidationError("declared order does not match table size");
      }
      if (table.size() > options.max_order) {
        throw ValidationError("group order exceeds limit " + std::to_string(options.max_order));
      }
      std::vector<std::string> labels;
      if (desc.contains("labels")) {
        labels = desc.at("labels").get<std::vector<std::string>>();
      }
      return FiniteGroup(std::move(table), std::move(labels));
    }
    if (desc.contains("permutation_generators")) {
      const auto gens = desc.at("permutation_generators").get<std::vector<std::vector<int>>>();
      const int degree = desc.contains("degree") ? desc.at("degree").get<int>()
                                                 : (gens.empty() ? 0 : static_cast<int>(gens.front().size()));
      for (const auto& p : gens) {
        if (static_cast<int>(p.size()) != degree) {
          throw ValidationError("permutation generator has wrong degree");
        }
        std::vector<int> sorted = p;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < degree; ++i) {
          if (sorted[static_cast<std::size_t>(i)] != i) {
            throw ValidationError("generator is not a permutation of 0.." + std::to_string(degree - 1));
          }
        }
      }
      std::vector<int> id(static_cast<std::size_t>(degree));
      std::iota(id.begin(), id.end(), 0);
      std::vector<std::vector<int>> elems{id};
      std::map<std::vector<int>, int> index{{id, 0}};
      auto compose = [degree](const std::vector<int>& p, const std::vector<int>& q) {
        std::vector<int> r(static_cast<std::size_t>(degree));
        for (int i = 0; i < degree; ++i) {
          r[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])];
        }
        return r;
      };
      for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : gens) {
          auto y = compose(g, elems[head]);
          if (!index.contains(y)) {
            if (elems.size() >= options.max_order) {
              throw ValidationError("generator closure exceeds limit " + std::to_string(options.max_order));
            }
            index.emplace(y, static_cast<int>(elems.size()));
            elems.push_back(std::move(y));
          }
        }
      }
      const std::size_t n = elems.size();
      std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
      std::vector<std::string> labels(n);
      for (std::size_t a = 0; a < n; ++a) {
        labels[a] = cycle_label(elems[a]);
        for (std::size_t b = 0; b < n; ++b) {
          table[a][b] = index.at(compose(elems[a], elems[b]));
        }
      }
      return FiniteGroup(std::move(table), std::move(labels));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("group description: ") + e.what());
  }
  throw ParseError("group description needs \"table\" or \"permutation_generators\"");
}

FiniteGroup load_group_file(const std::string& path, const GroupLoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open group file " + path);
  }
  nlohmann::json desc;
  try {
    in >> desc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("group file " + path + ": " + e.what());
  }
  return load_group(desc, options);
}

bool SubgroupRef::contains(Element g) const {
  return std::binary_search(elements.begin(), elements.end(), g);
}

int CharacterQZ::at(Element h) const {
  const auto it = std::lower_bound(domain.elements.begin(), domain.elements.end(), h);
  if (it == domain.elements.end() || *it != h) {
    throw MathError("character evaluated outside its domain at element " + std::to_string(h));
  }
  return values[static_cast<std::size_t>(it - domain.elements.begin())];
}

bool CharacterQZ::is_trivial() const {
  return std::all_of(values.begin(), values.end(), [](int v) { return v == 0; });
}

Rational character_value(const FiniteGroup& g, const CharacterQZ& chi, Element h) {
  return Rational(chi.at(h), g.order());
}

bool is_subgroup(const FiniteGroup& g, const std::vector<Element>& elements) {
  if (elements.empty() || !std::is_sorted(elements.begin(), elements.end()) ||
      std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
    return false;
  }
  if (elements.front() != 0 || elements.back() >= g.order()) {
    return false;
  }
  for (Element a : elements) {
    if (!std::binary_search(elements.begin(), elements.end(), g.inv(a))) {
      return false;
    }
    for (Element b : elements) {
      if (!std::binary_search(elements.begin(), elements.end(), g.mul(a, b))) {
        return false;
      }
    }
  }
  return true;
}

SubgroupRef generated_subgroup(const FiniteGroup& g, const std::vector<Element>& generators) {
  std::vector<bool> in(static_cast<std::size_t>(g.order()), false);
  std::vector<Element> found{0};
  in[0] = true;
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (Element s : generators) {
      const Element y = g.mul(s, found[head]);
      if (!in[static_cast<std::size_t>(y)]) {
        in[static_cast<std::size_t>(y)] = true;
        found.push_back(y);
      }
    }
  }
  std::sort(found.begin(), found.end());
  return SubgroupRef{std::move(found)};
}

SubgroupRef whole_group(const FiniteGroup& g) {
  std::vector<Element> all(static_cast<std::size_t>(g.order()));
  std::iota(all.begin(), all.end(), 0);
  return SubgroupRef{std::move(all)};
}

SubgroupRef trivial_subgroup() { return SubgroupRef{{0}}; }

SubgroupRef conjugate_subgroup(const FiniteGroup& g, Element a, const SubgroupRef& h) {
  SubgroupRef out;
  out.elements.reserve(h.elements.size());
  for (Element x : h.elements) {
    out.elements.push_back(g.conj(a, x));
  }
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

std::vector<SubgroupRef> all_subgroups(const FiniteGroup& g) {
  std::set<SubgroupRef> found;
  for (Element a = 0; a < g.order(); ++a) {
    found.insert(generated_subgroup(g, {a}));
  }
  std::vector<SubgroupRef> work(found.begin(), found.end());
  std::vector<SubgroupRef> known = work;
  while (!work.empty()) {
    std::vector<SubgroupRef> next;
    for (const auto& a : work) {
      for (const auto& b : known) {
        if (std::includes(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end()) ||
            std::includes(b.elements.begin(), b.elements.end(), a.elements.begin(), a.elements.end())) {
          continue;
        }
        std::vector<Element> gens = a.elements;
        gens.insert(gens.end(), b.elements.begin(), b.elements.end());
        auto joined = generated_subgroup(g, gens);
        if (found.insert(joined).second) {
          next.push_back(std::move(joined));
        }
      }
    }
    known.insert(known.end(), next.begin(), next.end());
    work = std::move(next);
  }
  return {found.begin(), found.end()};
}

std::vector<SubgroupClass> subgroup_conjugacy_classes(const FiniteGroup& g) {
  const auto subs = all_subgroups(g);
  std::set<SubgroupRef> assigned;
  std::vector<SubgroupClass> classes;
  for (const auto& h : subs) {
    if (assigned.contains(h)) {
      continue;
    }
    std::set<SubgroupRef> members;
    for (Element a = 0; a < g.order(); ++a) {
      members.insert(conjugate_subgroup(g, a, h));
    }
    assigned.insert(members.begin(), members.end());
    // `subs` is sorted, so the first unassigned member seen is the least one.
    classes.push_back(SubgroupClass{*members.begin(), {members.begin(), members.end()}});
  }
  std::sort(classes.begin(), classes.end(), [](const SubgroupClass& x, const SubgroupClass& y) {
    if (x.representative.order() != y.representative.order()) {
      return x.representative.order() < y.representative.order();
    }
    return x.representative < y.representative;
  });
  return classes;
}

std::vector<CharacterQZ> one_dim_characters(const FiniteGroup& g, const SubgroupRef& h) {
  const int n = g.order();
  // Greedy generating set: every generator at least doubles the span.
  std::vector<Element> gens;
  SubgroupRef span = trivial_subgroup();
  for (Element x : h.elements) {
    if (!span.contains(x)) {
      gens.push_back(x);
      span = generated_subgroup(g, gens);
    }
  }
  std::vector<int> choice(gens.size(), 0);
  std::vector<CharacterQZ> out;
  std::vector<int> value(static_cast<std::size_t>(n), -1);
  while (true) {
    std::fill(value.begin(), value.end(), -1);
    value[0] = 0;
    std::vector<Element> queue{0};
    bool consistent = true;
    for (std::size_t head = 0; head < queue.size() && consistent; ++head) {
      const Element x = queue[head];
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const Element y = g.mul(gens[i], x);
        const int gv = choice[i] * (n / g.element_order(gens[i]));
        const int v = mod(value[static_cast<std::size_t>(x)] + gv, n);
        int& slot = value[static_cast<std::size_t>(y)];
        if (slot < 0) {
          slot = v;
          queue.push_back(y);
        } else if (slot != v) {
          consistent = false;
          break;
        }
      }
    }
    if (consistent) {
      CharacterQZ chi{h, {}};
      chi.values.reserve(h.elements.size());
      for (Element x : h.elements) {
        chi.values.push_back(value[static_cast<std::size_t>(x)]);
      }
      out.push_back(std::move(chi));
    }
    std::size_t i = 0;
    for (; i < gens.size(); ++i) {
      if (++choice[i] < g.element_order(gens[i])) {
        break;
      }
      choice[i] = 0;
    }
    if (i == gens.size()) {
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const CharacterQZ& a, const CharacterQZ& b) { return a.values < b.values; });
  return out;
}

CharacterQZ conjugate_character(const FiniteGroup& g, Element a, const CharacterQZ& alpha) {
  CharacterQZ beta{conjugate_subgroup(g, a, alpha.domain), {}};
  const Element ainv = g.inv(a);
  beta.values.reserve(beta.domain.elements.size());
  for (Element b : beta.domain.elements) {
    beta.values.push_back(alpha.at(g.conj(ainv, b)));
  }
  return beta;
}

SubgroupRef kernel(const FiniteGroup& /*g*/, const CharacterQZ& alpha) {
  SubgroupRef out;
  for (std::size_t i = 0; i < alpha.domain.elements.size(); ++i) {
    if (alpha.values[i] == 0) {
      out.elements.push_back(alpha.domain.elements[i]);
    }
  }
  return out;
}

SubgroupRef normalizer(const FiniteGroup& g, const SubgroupRef& h) {
  SubgroupRef out;
  for (Element a = 0; a < g.order(); ++a) {
    if (conjugate_subgroup(g, a, h) == h) {
      out.elements.push_back(a);
    }
  }
  return out;
}

bool is_conjugate_subgroup(const FiniteGroup& g, const SubgroupRef& h, const SubgroupRef& k) {
  if (h.order() != k.order()) {
    return false;
  }
  for (Element a = 0; a < g.order(); ++a) {
    if (conjugate_subgroup(g, a, h) == k) {
      return true;
    }
  }
  return false;
}

std::pair<SubgroupRef, CharacterQZ> canonical_pair(const FiniteGroup& g, const SubgroupRef& h,
                                                   const CharacterQZ& alpha) {
  if (alpha.domain != h) {
    throw MathError("canonical_pair: character is not defined on the given subgroup");
  }
  std::optional<std::pair<SubgroupRef, CharacterQZ>> best;
  for (Element a = 0; a < g.order(); ++a) {
    auto beta = conjugate_character(g, a, alpha);
    auto k = beta.domain;
    if (!best || std::tie(k.elements, beta.values) < std::tie(best->first.elements, best->second.values)) {
      best.emplace(std::move(k), std::move(beta));
    }
  }
  return *best;
}

bool is_character(const FiniteGroup& g, const CharacterQZ& chi) {
  const int n = g.order();
  const auto& dom = chi.domain.elements;
  if (dom.size() != chi.values.size() || !is_subgroup(g, dom)) {
    return false;
  }
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const int v = chi.values[i];
    if (v < 0 || v >= n) {
      return false;
    }
    // denominator of v/n divides the element order  <=>  order * v ≡ 0 (mod n)
    if ((static_cast<long long>(g.element_order(dom[i])) * v) % n != 0) {
      return false;
    }
  }
  if (chi.at(0) != 0) {
    return false;
  }
  for (std::size_t i = 0; i < dom.size(); ++i) {
    for (std::size_t j = 0; j < dom.size(); ++j) {
      if (chi.at(g.mul(dom[i], dom[j])) != mod(chi.values[i] + chi.values[j], n)) {
        return false;
      }
    }
  }
  return true;
}

CharacterQZ extend_character(const FiniteGroup& g, const SubgroupRef& h, const std::map<Element, Rational>& values) {
  const int n = g.order();
  std::vector<Element> gens;
  std::vector<int> gen_values;
  for (const auto& [x, q] : values) {
    if (!h.contains(x)) {
      throw ValidationError("character value given for element " + std::to_string(x) + " outside the subgroup");
    }
    const Rational scaled = q * Rational(n);
    if (scaled.denominator() != 1) {
      throw ValidationError("character value " + to_string(q) + " at element " + std::to_string(x) +
                            " is not a multiple of 1/|G|");
    }
    gens.push_back(x);
    gen_values.push_back(mod(scaled.numerator(), n));
  }
  if (generated_subgroup(g, gens) != h) {
    throw ValidationError("character values do not determine the character: given elements do not generate H");
  }
  std::vector<int> value(static_cast<std::size_t>(n), -1);
  value[0] = 0;
  std::vector<Element> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Element x = queue[head];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Element y = g.mul(gens[i], x);
      const int v = mod(value[static_cast<std::size_t>(x)] + gen_values[i], n);
      int& slot = value[static_cast<std::size_t>(y)];
      if (slot < 0) {
        slot = v;
        queue.push_back(y);
      } else if (slot != v) {
        throw ValidationError("character values are not a homomorphism (conflict at element " + std::to_string(y) +
                              ")");
      }
    }
  }
  CharacterQZ chi{h, {}};
  for (Element x : h.elements) {
    chi.values.push_back(value[static_cast<std::size_t>(x)]);
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (chi.at(gens[i]) != gen_values[i]) {
      throw ValidationError("character values are not a homomorphism at element " + std::to_string(gens[i]));
    }
  }
  if (!is_character(g, chi)) {
    throw ValidationError("character values violate the order condition");
  }
  return chi;
}

GroupCatalog::GroupCatalog(FiniteGroup g) : group_(std::move(g)) {
  classes_ = subgroup_conjugacy_classes(group_);
  for (int c = 0; c < class_count(); ++c) {
    const auto& rep = representative(c);
    for (Element a = 0; a < group_.order(); ++a) {
      // a * member * a^{-1} == rep  for member = a^{-1} rep a
      auto member = conjugate_subgroup(group_, group_.inv(a), rep);
      index_.try_emplace(member.elements, Located{c, a});
    }
    characters_.push_back(one_dim_characters(group_, rep));
    std::map<std::vector<int>, int> idx;
    for (std::size_t i = 0; i < characters_.back().size(); ++i) {
      idx.emplace(characters_.back()[i].values, static_cast<int>(i));
    }
    character_index_.push_back(std::move(idx));
  }
}

GroupCatalog::Located GroupCatalog::locate(const SubgroupRef& h) const {
  const auto it = index_.find(h.elements);
  if (it == index_.end()) {
    throw ValidationError("element set is not a subgroup");
  }
  return it->second;
}

int GroupCatalog::character_index(int cls, const CharacterQZ& chi) const {
  const auto& idx = character_index_[static_cast<std::size_t>(cls)];
  const auto it = idx.find(chi.values);
  if (it == idx.end() || chi.domain != representative(cls)) {
    throw ValidationError("not a character of the class representative");
  }
  return it->second;
}

std::pair<int, int> GroupCatalog::transport(const SubgroupRef& h, const CharacterQZ& alpha) const {
  const auto loc = locate(h);
  const auto moved = conjugate_character(group_, loc.conjugator, alpha);
  return {loc.cls, character_index(loc.cls, moved)};
}

std::string GroupCatalog::class_name(int cls) const {
  if (cls == whole_class()) {
    return "G";
  }
  if (cls == trivial_class()) {
    return "e";
  }
  return "H" + std::to_string(cls);
}

int GroupCatalog::parse_class_name(const std::string& name) const {
  if (name == "G") {
    return whole_class();
  }
  if (name == "e") {
    return trivial_class();
  }
  if (name.size() > 1 && name[0] == 'H') {
    const std::string digits = name.substr(1);
    if (std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      const int k = std::stoi(digits);
      if (k >= 0 && k < class_count()) {
        return k;
      }
    }
  }
  throw ParseError("unknown subgroup class name '" + name + "'");
}

}  // namespace eqps
