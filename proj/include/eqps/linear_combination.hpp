#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "eqps/checked.hpp"

namespace eqps {

/// Finite formal sum over integer basis keys. Terms are kept sorted by key
/// with no zero coefficients, so equality is term-by-term. `Tag` keeps
/// elements of different rings from mixing.
template <class Tag, class Coeff>
class LinearCombination {
 public:
  using coeff_type = Coeff;
  using term = std::pair<int, Coeff>;

  LinearCombination() = default;
  LinearCombination(std::initializer_list<term> terms) {
    for (const auto& [k, c] : terms) {
      add_term(k, c);
    }
  }

  static LinearCombination basis(int key, Coeff c = Coeff(1)) {
    LinearCombination out;
    out.add_term(key, c);
    return out;
  }

  /// Builds from a dense coefficient vector indexed by key.
  static LinearCombination from_dense(const std::vector<Coeff>& dense) {
    LinearCombination out;
    for (std::size_t k = 0; k < dense.size(); ++k) {
      if (dense[k] != Coeff(0)) {
        out.terms_.emplace_back(static_cast<int>(k), dense[k]);
      }
    }
    return out;
  }

  const std::vector<term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Coeff coefficient(int key) const {
    const auto it = find(key);
    return it != terms_.end() && it->first == key ? it->second : Coeff(0);
  }

  void add_term(int key, const Coeff& c) {
    if (c == Coeff(0)) {
      return;
    }
    auto it = find(key);
    if (it != terms_.end() && it->first == key) {
      it->second = checked_add(it->second, c);
      if (it->second == Coeff(0)) {
        terms_.erase(it);
      }
    } else {
      terms_.insert(it, term{key, c});
    }
  }

  LinearCombination& operator+=(const LinearCombination& other) {
    std::vector<term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
      if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == terms_.end() || b->first < a->first) {
        merged.push_back(*b++);
      } else {
        Coeff c = checked_add(a->second, b->second);
        if (c != Coeff(0)) {
          merged.emplace_back(a->first, c);
        }
        ++a;
        ++b;
      }
    }
    terms_ = std::move(merged);
    return *this;
  }

  LinearCombination operator-() const {
    LinearCombination out = *this;
    for (auto& t : out.terms_) {
      t.second = checked_neg(t.second);
    }
    return out;
  }

  LinearCombination& operator-=(const LinearCombination& other) { return *this += -other; }

  LinearCombination scaled(const Coeff& s) const {
    LinearCombination out;
    if (s == Coeff(0)) {
      return out;
    }
    out.terms_.reserve(terms_.size());
    for (const auto& [k, c] : terms_) {
      out.terms_.emplace_back(k, checked_mul(c, s));
    }
    return out;
  }

  friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) { return a += b; }
  friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) { return a -= b; }
  bool operator==(const LinearCombination&) const = default;

 private:
  typename std::vector<term>::iterator find(int key) {
    return std::lower_bound(terms_.begin(), terms_.end(), key, [](const term& t, int k) { return t.first < k; });
  }
  typename std::vector<term>::const_iterator find(int key) const {
    return std::lower_bound(terms_.begin(), terms_.end(), key, [](const term& t, int k) { return t.first < k; });
  }

  std::vector<term> terms_;
};

}  // namespace eqps
