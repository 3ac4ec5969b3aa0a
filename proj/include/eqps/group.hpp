#pragma once

// Finite groups given by explicit data, their subgroups up to conjugacy and
// the one-dimensional characters of subgroups.
//
// Characters take values in Q/Z. A value is stored as an integer k modulo
// |G| standing for k/|G|; every element order divides |G|, so this is exact.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqps/rational.hpp"

namespace eqps {

using Element = int;

class FiniteGroup {
 public:
  /// Validates closure, identity (element 0), inverses and associativity.
  /// Throws ValidationError.
  explicit FiniteGroup(std::vector<std::vector<Element>> table,
                       std::vector<std::string> labels = {});

  int order() const { return order_; }
  Element identity() const { return 0; }
  Element mul(Element a, Element b) const { return table_[static_cast<std::size_t>(a * order_ + b)]; }
  Element inv(Element a) const { return inverse_[static_cast<std::size_t>(a)]; }
  /// a b a^{-1}
  Element conj(Element a, Element b) const { return mul(mul(a, b), inv(a)); }
  Element pow(Element a, int k) const;
  int element_order(Element a) const { return elem_order_[static_cast<std::size_t>(a)]; }
  const std::string& label(Element a) const { return labels_[static_cast<std::size_t>(a)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::vector<std::vector<Element>> table() const;

  bool operator==(const FiniteGroup& other) const { return order_ == other.order_ && table_ == other.table_; }

 private:
  int order_ = 0;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::vector<int> elem_order_;
  std::vector<std::string> labels_;
};

struct GroupLoadOptions {
  std::size_t max_order = 128;
};

/// Either {"order", "table", "labels"?} or {"permutation_generators", "degree"}.
/// Generator closure is breadth-first from the identity with generators in the
/// given order; the product is composition, (pq)(i) = p(q(i)).
FiniteGroup load_group(const nlohmann::json& desc, const GroupLoadOptions& options = {});
FiniteGroup load_group_file(const std::string& path, const GroupLoadOptions& options = {});

/// A subgroup as a strictly increasing element list. Ordering is
/// lexicographic on that list.
struct SubgroupRef {
  std::vector<Element> elements;

  int order() const { return static_cast<int>(elements.size()); }
  bool contains(Element g) const;
  auto operator<=>(const SubgroupRef&) const = default;
};

/// A homomorphism H -> Q/Z. values[i] is the value on domain.elements[i], in
/// units of 1/|G|.
struct CharacterQZ {
  SubgroupRef domain;
  std::vector<int> values;

  int at(Element h) const;
  bool is_trivial() const;
  auto operator<=>(const CharacterQZ&) const = default;
};

/// Exact value of a character on an element as a rational in [0,1).
Rational character_value(const FiniteGroup& g, const CharacterQZ& chi, Element h);

bool is_subgroup(const FiniteGroup& g, const std::vector<Element>& elements);
SubgroupRef generated_subgroup(const FiniteGroup& g, const std::vector<Element>& generators);
SubgroupRef whole_group(const FiniteGroup& g);
SubgroupRef trivial_subgroup();
/// a H a^{-1}
SubgroupRef conjugate_subgroup(const FiniteGroup& g, Element a, const SubgroupRef& h);

/// All subgroups, sorted. Cyclic subgroups closed under pairwise joins.
std::vector<SubgroupRef> all_subgroups(const FiniteGroup& g);

struct SubgroupClass {
  SubgroupRef representative;
  std::vector<SubgroupRef> members;
};

/// Classes sorted by (order, representative); the representative is the least member.
std::vector<SubgroupClass> subgroup_conjugacy_classes(const FiniteGroup& g);

/// All characters of H, sorted lexicographically on value vectors (trivial first).
std::vector<CharacterQZ> one_dim_characters(const FiniteGroup& g, const SubgroupRef& h);

/// beta on a H a^{-1} with beta(b) = alpha(a^{-1} b a).
CharacterQZ conjugate_character(const FiniteGroup& g, Element a, const CharacterQZ& alpha);

SubgroupRef kernel(const FiniteGroup& g, const CharacterQZ& alpha);
SubgroupRef normalizer(const FiniteGroup& g, const SubgroupRef& h);
bool is_conjugate_subgroup(const FiniteGroup& g, const SubgroupRef& h, const SubgroupRef& k);

/// Least (subgroup, values) over all simultaneous conjugates.
std::pair<SubgroupRef, CharacterQZ> canonical_pair(const FiniteGroup& g, const SubgroupRef& h,
                                                   const CharacterQZ& alpha);

/// Checks the homomorphism law, value(e) = 0 and the order condition.
bool is_character(const FiniteGroup& g, const CharacterQZ& chi);

/// Extends values given on a generating subset of H to a character of H.
/// Throws ValidationError if the data is inconsistent or does not generate H.
CharacterQZ extend_character(const FiniteGroup& g, const SubgroupRef& h,
                             const std::map<Element, Rational>& values);

/// Precomputed subgroup data for one group: every subgroup's class and a
/// conjugator onto the class representative, and the characters of every
/// representative. Immutable after construction.
class GroupCatalog {
 public:
  explicit GroupCatalog(FiniteGroup g);

  const FiniteGroup& group() const { return group_; }
  const std::vector<SubgroupClass>& classes() const { return classes_; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  const SubgroupRef& representative(int cls) const { return classes_[static_cast<std::size_t>(cls)].representative; }
  const std::vector<CharacterQZ>& characters(int cls) const { return characters_[static_cast<std::size_t>(cls)]; }
  int trivial_class() const { return 0; }
  int whole_class() const { return class_count() - 1; }

  struct Located {
    int cls;
    Element conjugator;  // conjugator * H * conjugator^{-1} == representative
  };
  /// Throws ValidationError if h is not a subgroup.
  Located locate(const SubgroupRef& h) const;
  int class_of(const SubgroupRef& h) const { return locate(h).cls; }

  /// Index of a character of the representative of `cls` in characters(cls).
  int character_index(int cls, const CharacterQZ& chi) const;

  /// Moves (H, alpha) onto the class representative: returns (class, character index).
  std::pair<int, int> transport(const SubgroupRef& h, const CharacterQZ& alpha) const;

  /// "e", "G" or "H<k>"
  std::string class_name(int cls) const;
  /// Inverse of class_name; throws ParseError.
  int parse_class_name(const std::string& name) const;

 private:
  FiniteGroup group_;
  std::vector<SubgroupClass> classes_;
  std::map<std::vector<Element>, Located> index_;
  std::vector<std::vector<CharacterQZ>> characters_;
  std::vector<std::map<std::vector<int>, int>> character_index_;
};

}  // namespace eqps
