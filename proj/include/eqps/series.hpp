#pragma once

// Truncated multivariate power series in t1..tr over one of the coefficient
// rings of burnside.hpp, the pre-lambda binomials (1 - t^w)^{-s[G/H]_alpha},
// and unique factorization of a series over Ã(G) into such binomials.
//
// A series is truncated to a componentwise box: a degree v is kept iff
// v <= bound in every coordinate.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqps/burnside.hpp"
#include "eqps/error.hpp"

namespace eqps {

struct MultiDegree {
  std::vector<int> exponents;

  MultiDegree() = default;
  explicit MultiDegree(std::vector<int> e) : exponents(std::move(e)) {}
  static MultiDegree zero(int arity) { return MultiDegree(std::vector<int>(static_cast<std::size_t>(arity), 0)); }

  int arity() const { return static_cast<int>(exponents.size()); }
  int operator[](int i) const { return exponents[static_cast<std::size_t>(i)]; }
  std::int64_t total() const;
  bool is_zero() const;
  /// Componentwise <=.
  bool fits(const MultiDegree& bound) const;
  MultiDegree operator+(const MultiDegree& other) const;
  MultiDegree operator-(const MultiDegree& other) const;
  MultiDegree scaled(int k) const;

  auto operator<=>(const MultiDegree&) const = default;
};

/// (total degree, lexicographic)
bool graded_less(const MultiDegree& a, const MultiDegree& b);

/// "1", "t^3", "t1^2*t2"
std::string monomial_string(const MultiDegree& d);
/// Inverse of monomial_string for a known arity. Throws ParseError.
MultiDegree parse_monomial(std::string_view text, int arity);
/// "4,4" -> (4,4). Throws ParseError.
MultiDegree parse_bound(std::string_view text);

std::string ring_tag_of(const TildeBurnsideRing&);
std::string ring_tag_of(const BurnsideQRing&);
std::string ring_tag_of(const R1Ring&);
std::string ring_tag_of(const IntegerRing&);

template <class Ring>
class MultiSeries {
 public:
  using ring_type = Ring;
  using value_type = typename Ring::value_type;
  using term_map = std::map<MultiDegree, value_type>;

  MultiSeries(std::shared_ptr<const Ring> ring, MultiDegree bound) : ring_(std::move(ring)), bound_(std::move(bound)) {
    for (int b : bound_.exponents) {
      if (b < 0) {
        throw MathError("series bound has a negative component");
      }
    }
  }

  static MultiSeries one(std::shared_ptr<const Ring> ring, MultiDegree bound) {
    MultiSeries out(std::move(ring), std::move(bound));
    out.add_term(MultiDegree::zero(out.arity()), out.ring_->one());
    return out;
  }

  const Ring& ring() const { return *ring_; }
  const std::shared_ptr<const Ring>& ring_ptr() const { return ring_; }
  const MultiDegree& bound() const { return bound_; }
  int arity() const { return bound_.arity(); }
  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  value_type coefficient(const MultiDegree& d) const {
    const auto it = terms_.find(d);
    return it == terms_.end() ? ring_->zero() : it->second;
  }

  /// Adds c at degree d; degrees outside the bound are dropped.
  void add_term(const MultiDegree& d, const value_type& c) {
    if (d.arity() != arity()) {
      throw MathError("degree arity " + std::to_string(d.arity()) + " does not match series arity " +
                      std::to_string(arity()));
    }
    if (!d.fits(bound_) || ring_->is_zero(c)) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(d, c);
    if (!inserted) {
      it->second = ring_->add(it->second, c);
      if (ring_->is_zero(it->second)) {
        terms_.erase(it);
      }
    }
  }

  /// Equal bound, ring and terms.
  bool operator==(const MultiSeries& other) const { return bound_ == other.bound_ && terms_ == other.terms_; }

 private:
  std::shared_ptr<const Ring> ring_;
  MultiDegree bound_;
  term_map terms_;
};

using TBSeries = MultiSeries<TildeBurnsideRing>;
using AQSeries = MultiSeries<BurnsideQRing>;
using R1Series = MultiSeries<R1Ring>;
using ZSeries = MultiSeries<IntegerRing>;

/// Throws MathError unless arity, bound and ring agree.
template <class Ring>
void require_compatible(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b, std::string_view op);

template <class Ring>
MultiSeries<Ring> series_add(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b);
template <class Ring>
MultiSeries<Ring> series_neg(const MultiSeries<Ring>& a);
/// Cauchy product; picks the parallel kernel for large operands.
template <class Ring>
MultiSeries<Ring> series_mul(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b);
/// Requires constant term 1.
template <class Ring>
MultiSeries<Ring> series_inverse(const MultiSeries<Ring>& a);
/// Any integer exponent; negative exponents go through the inverse.
template <class Ring>
MultiSeries<Ring> series_pow(const MultiSeries<Ring>& a, int e);
/// Same series, truncated to a smaller box.
template <class Ring>
MultiSeries<Ring> truncate(const MultiSeries<Ring>& a, const MultiDegree& bound);

/// t'_j -> t^{images[j]}, truncated to `bound`. Every image must be nonzero.
template <class Ring>
MultiSeries<Ring> substitute_monomial(const MultiSeries<Ring>& a, const std::vector<MultiDegree>& images,
                                      const MultiDegree& bound);

/// Coefficient-wise image under f into `target`.
template <class Target, class Ring, class F>
MultiSeries<Target> map_coefficients(const MultiSeries<Ring>& a, std::shared_ptr<const Target> target, F f) {
  MultiSeries<Target> out(std::move(target), a.bound());
  for (const auto& [d, c] : a.terms()) {
    out.add_term(d, f(c));
  }
  return out;
}

MultiSeries<BurnsideQRing> reduce_rho(const TBSeries& a, std::shared_ptr<const BurnsideQRing> target);
ZSeries reduce_rhohat(const TBSeries& a);
R1Series reduce_eps(const TBSeries& a);

template <class Ring>
nlohmann::json series_to_json(const MultiSeries<Ring>& a);
template <class Ring>
MultiSeries<Ring> series_from_json(const nlohmann::json& j, std::shared_ptr<const Ring> ring);
/// One term per line, "deg: coeff", degrees in lexicographic order.
template <class Ring>
std::string series_to_text(const MultiSeries<Ring>& a);

// ---------------------------------------------------------------- binomials

/// (1 - t^w)^{-s[cls]}
struct BinomialFactor {
  MultiDegree w;
  std::int64_t s = 1;
  TBClass cls;

  bool operator==(const BinomialFactor&) const = default;
};

/// Canonical order: total(w), then w lexicographically, then class id.
bool factor_less(const BinomialFactor& a, const BinomialFactor& b);

class FactoredSeries {
 public:
  FactoredSeries() = default;
  explicit FactoredSeries(int arity) : arity_(arity) {}
  /// Sorts, merges equal (w, cls) and drops zero exponents.
  FactoredSeries(int arity, std::vector<BinomialFactor> factors);

  int arity() const { return arity_; }
  const std::vector<BinomialFactor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }

  bool operator==(const FactoredSeries&) const = default;

 private:
  int arity_ = 1;
  std::vector<BinomialFactor> factors_;
};

/// (1 - t^w)^{-s[cls]} up to `bound`.
TBSeries expand_binomial(std::shared_ptr<const TildeBurnsideRing> ring, const BinomialFactor& f,
                         const MultiDegree& bound);
/// (1 - t^w)^{-e} over Z by the binomial theorem.
ZSeries expand_binomial_integer(const MultiDegree& w, std::int64_t e, const MultiDegree& bound);
/// Product of all factors, expanded to `bound`.
TBSeries expand(std::shared_ptr<const TildeBurnsideRing> ring, const FactoredSeries& f, const MultiDegree& bound);

/// Peels binomials off at the minimal nonconstant degree until the residual
/// is 1 up to the bound. Throws MathError for a constant term other than 1.
FactoredSeries factorize(const TBSeries& p);

/// "(1 - t1*t2)^{-[G/G]_{a1}} * (1 - t^2)^{[G/e]}"; "1" when empty.
std::string factored_to_text(const TildeBurnsideRing& ring, const FactoredSeries& f);
FactoredSeries factored_from_text(const TildeBurnsideRing& ring, std::string_view text, int arity);
nlohmann::json factored_to_json(const TildeBurnsideRing& ring, const FactoredSeries& f);
FactoredSeries factored_from_json(const TildeBurnsideRing& ring, const nlohmann::json& j);

/// A non-equivariant series over Z in factored form: (1 - t^w)^{-e} factors.
struct IntegerFactor {
  MultiDegree w;
  std::int64_t e = 1;
  bool operator==(const IntegerFactor&) const = default;
};
ZSeries expand_integer(const std::vector<IntegerFactor>& factors, const MultiDegree& bound);

}  // namespace eqps
