#pragma once

// Equipped G-sets and the modified Burnside ring Ã(G), together with the
// ordinary Burnside ring A(G) (integral and rational), the ring R1(G) spanned
// by one-dimensional characters of G, and the reductions
//   rho : Ã(G) -> A(G),  rhohat : Ã(G) -> Z,  eps : Ã(G) -> R1(G).
//
// Products and symmetric powers in Ã(G) are computed by realizing classes as
// concrete equipped G-sets and decomposing into orbits. The A(G) product goes
// through the table of marks instead.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqps/group.hpp"
#include "eqps/linear_combination.hpp"
#include "eqps/rational.hpp"

namespace eqps {

enum class RingKind { TildeBurnside, BurnsideQ, R1, Integer };

std::string ring_tag(RingKind kind);
RingKind parse_ring_tag(std::string_view tag);

struct TBTag {};
struct BurnsideTag {};
struct R1Tag {};

/// Element of Ã(G); keys are TBClass ids of the owning ring.
using TBElement = LinearCombination<TBTag, std::int64_t>;
/// Element of A(G); keys are subgroup class indices.
using BurnsideElement = LinearCombination<BurnsideTag, std::int64_t>;
/// Element of A(G) ⊗ Q; keys are subgroup class indices.
using BurnsideQElement = LinearCombination<BurnsideTag, Rational>;
/// Element of R1(G); keys are indices into the character list of G.
using R1Element = LinearCombination<R1Tag, std::int64_t>;

/// Irreducible equipped G-set [G/H]_alpha, identified by its dense id in the ring.
struct TBClass {
  int id = 0;
  auto operator<=>(const TBClass&) const = default;
};

/// Finite G-set with a character of each isotropy subgroup attached.
struct EquippedGSet {
  int size = 0;
  std::vector<int> action;              // action[a * size + x] = a.x
  std::vector<CharacterQZ> characters;  // characters[x] lives on G_x

  int act(Element a, int x) const { return action[static_cast<std::size_t>(a * size + x)]; }
  SubgroupRef isotropy(const FiniteGroup& g, int x) const;
};

/// Throws ValidationError naming the offending element/point pair.
void validate_equipped(const FiniteGroup& g, const EquippedGSet& x);
EquippedGSet disjoint_union(const EquippedGSet& x, const EquippedGSet& y);
/// Diagonal action, pointwise character sum.
EquippedGSet cartesian_product(const FiniteGroup& g, const EquippedGSet& x, const EquippedGSet& y);
/// Point p of the result is point perm[p] of x.
EquippedGSet relabel(const FiniteGroup& g, const EquippedGSet& x, const std::vector<int>& perm);

/// The ordinary Burnside ring A(G), product via the table of marks.
class BurnsideRing {
 public:
  explicit BurnsideRing(std::shared_ptr<const GroupCatalog> catalog);

  const GroupCatalog& catalog() const { return *catalog_; }
  std::shared_ptr<const GroupCatalog> catalog_ptr() const { return catalog_; }

  /// marks(c, d) = number of points of G/H_d fixed by H_c.
  std::int64_t marks(int c, int d) const { return marks_[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)]; }

  BurnsideElement one() const;
  BurnsideElement mul(const BurnsideElement& a, const BurnsideElement& b) const;
  BurnsideQElement mul(const BurnsideQElement& a, const BurnsideQElement& b) const;
  std::vector<std::int64_t> mark_vector(const BurnsideElement& a) const;

  std::string class_name(int cls) const;  // "[G/H1]"
  int parse_class(std::string_view text) const;
  std::string render(const BurnsideElement& a) const;
  std::string render(const BurnsideQElement& a) const;
  BurnsideQElement parse_q(std::string_view text) const;

 private:
  std::shared_ptr<const GroupCatalog> catalog_;
  std::vector<std::vector<std::int64_t>> marks_;
};

/// R1(G): group ring of the character group of G.
class R1Ring {
 public:
  using value_type = R1Element;
  static constexpr RingKind kind = RingKind::R1;

  explicit R1Ring(std::shared_ptr<const GroupCatalog> catalog);

  const GroupCatalog& catalog() const { return *catalog_; }
  int character_count() const;
  const CharacterQZ& character(int index) const;

  R1Element zero() const { return {}; }
  R1Element one() const { return R1Element::basis(0); }
  R1Element add(const R1Element& a, const R1Element& b) const { return a + b; }
  R1Element neg(const R1Element& a) const { return -a; }
  R1Element mul(const R1Element& a, const R1Element& b) const;
  bool is_zero(const R1Element& a) const { return a.is_zero(); }

  std::string basis_name(int index) const;  // "1" or "[a<k>]"
  std::string render(const R1Element& a) const;
  R1Element parse(std::string_view text) const;

 private:
  std::shared_ptr<const GroupCatalog> catalog_;
  std::vector<std::vector<int>> sum_table_;
};

/// A(G) ⊗ Q as a coefficient ring.
class BurnsideQRing {
 public:
  using value_type = BurnsideQElement;
  static constexpr RingKind kind = RingKind::BurnsideQ;

  explicit BurnsideQRing(std::shared_ptr<const BurnsideRing> burnside) : burnside_(std::move(burnside)) {}

  const BurnsideRing& burnside() const { return *burnside_; }
  BurnsideQElement zero() const { return {}; }
  BurnsideQElement one() const { return BurnsideQElement::basis(burnside_->catalog().whole_class()); }
  BurnsideQElement add(const BurnsideQElement& a, const BurnsideQElement& b) const { return a + b; }
  BurnsideQElement neg(const BurnsideQElement& a) const { return -a; }
  BurnsideQElement mul(const BurnsideQElement& a, const BurnsideQElement& b) const { return burnside_->mul(a, b); }
  bool is_zero(const BurnsideQElement& a) const { return a.is_zero(); }
  std::string render(const BurnsideQElement& a) const { return burnside_->render(a); }
  BurnsideQElement parse(std::string_view text) const { return burnside_->parse_q(text); }

 private:
  std::shared_ptr<const BurnsideRing> burnside_;
};

/// The modified Burnside ring Ã(G). Thread-safe: the product and
/// symmetric-power memo tables are filled under a lock and never change a
/// value once stored.
class TildeBurnsideRing {
 public:
  using value_type = TBElement;
  static constexpr RingKind kind = RingKind::TildeBurnside;

  explicit TildeBurnsideRing(std::shared_ptr<const GroupCatalog> catalog);
  static std::shared_ptr<const TildeBurnsideRing> create(FiniteGroup g);

  const GroupCatalog& catalog() const { return *catalog_; }
  std::shared_ptr<const GroupCatalog> catalog_ptr() const { return catalog_; }
  const FiniteGroup& group() const { return catalog_->group(); }
  const BurnsideRing& burnside() const { return *burnside_; }
  std::shared_ptr<const BurnsideRing> burnside_ptr() const { return burnside_; }
  const R1Ring& r1() const { return *r1_; }
  std::shared_ptr<const R1Ring> r1_ptr() const { return r1_; }

  struct ClassInfo {
    int subgroup_class;
    int character;  // index into catalog().characters(subgroup_class)
  };
  int class_count() const { return static_cast<int>(classes_.size()); }
  const ClassInfo& info(TBClass c) const { return classes_[static_cast<std::size_t>(c.id)]; }
  const SubgroupRef& subgroup(TBClass c) const { return catalog_->representative(info(c).subgroup_class); }
  const CharacterQZ& character(TBClass c) const;
  /// Canonical class of (H, alpha) for any subgroup H and character alpha on it.
  TBClass class_of(const SubgroupRef& h, const CharacterQZ& alpha) const;
  /// Canonical class for a character index of a class representative.
  TBClass class_at(int subgroup_class, int character_index) const;
  TBClass unit_class() const { return class_at(catalog_->whole_class(), 0); }

  TBElement zero() const { return {}; }
  TBElement one() const { return TBElement::basis(unit_class().id); }
  TBElement from_class(TBClass c, std::int64_t coeff = 1) const { return TBElement::basis(c.id, coeff); }
  TBElement add(const TBElement& a, const TBElement& b) const { return a + b; }
  TBElement neg(const TBElement& a) const { return -a; }
  TBElement mul(const TBElement& a, const TBElement& b) const;
  bool is_zero(const TBElement& a) const { return a.is_zero(); }

  /// Product of two irreducible classes (memoized).
  const TBElement& class_product(TBClass a, TBClass b) const;

  EquippedGSet realize(TBClass c) const;
  /// Disjoint union of copies; all coefficients must be nonnegative.
  EquippedGSet realize(const TBElement& a) const;
  TBElement orbit_decompose(const EquippedGSet& x) const;
  /// S^k of a concrete equipped set.
  TBElement symmetric_power(const EquippedGSet& x, int k) const;
  /// S^k of an irreducible class (memoized).
  const TBElement& symmetric_power(TBClass c, int k) const;

  BurnsideElement rho(const TBElement& a) const;
  std::int64_t rhohat(const TBElement& a) const;
  R1Element eps(const TBElement& a) const;

  std::string class_name(TBClass c) const;  // "[G/H1]_{a1}"
  TBClass parse_class(std::string_view text) const;
  std::string render(const TBElement& a) const;
  TBElement parse(std::string_view text) const;
  nlohmann::json to_json(const TBElement& a) const;
  TBElement from_json(const nlohmann::json& j) const;
  /// Human-readable description of every class occurring in `a`.
  std::vector<std::string> legend(const std::vector<TBClass>& classes) const;

 private:
  std::shared_ptr<const GroupCatalog> catalog_;
  std::shared_ptr<const BurnsideRing> burnside_;
  std::shared_ptr<const R1Ring> r1_;
  std::vector<ClassInfo> classes_;
  std::vector<std::vector<int>> class_id_;  // [subgroup class][character index] -> canonical id

  mutable std::shared_mutex cache_mutex_;
  mutable std::vector<std::unique_ptr<TBElement>> product_cache_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<TBElement>> sympow_cache_;
};

/// Z as a coefficient ring.
class IntegerRing {
 public:
  using value_type = std::int64_t;
  static constexpr RingKind kind = RingKind::Integer;

  std::int64_t zero() const { return 0; }
  std::int64_t one() const { return 1; }
  std::int64_t add(std::int64_t a, std::int64_t b) const { return checked_add(a, b); }
  std::int64_t neg(std::int64_t a) const { return checked_neg(a); }
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return checked_mul(a, b); }
  bool is_zero(std::int64_t a) const { return a == 0; }
  std::string render(std::int64_t a) const { return std::to_string(a); }
  std::int64_t parse(std::string_view text) const;
};

/// Human-readable statement of a character: "{1: 1/2, 2: 0}" keyed by element label.
std::string describe_character(const FiniteGroup& g, const CharacterQZ& chi);

}  // namespace eqps
