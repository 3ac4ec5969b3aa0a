#pragma once

// Brute-force reference computations used by the unit tests. They work on
// coset models of G/H directly and share no code with the ring
// implementation beyond class naming (class_of).

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "eqps/burnside.hpp"
#include "eqps/group.hpp"

#ifndef EQPS_FIXTURE_DIR
#define EQPS_FIXTURE_DIR "fixtures"
#endif

namespace oracle {

using eqps::CharacterQZ;
using eqps::Element;
using eqps::FiniteGroup;
using eqps::SubgroupRef;
using eqps::TBClass;
using eqps::TBElement;
using eqps::TildeBurnsideRing;

inline std::string fixture(const std::string& rel) { return std::string(EQPS_FIXTURE_DIR) + "/" + rel; }

inline std::shared_ptr<const TildeBurnsideRing> ring(const std::string& name) {
  static std::map<std::string, std::shared_ptr<const TildeBurnsideRing>> cache;
  auto& slot = cache[name];
  if (!slot) {
    slot = TildeBurnsideRing::create(eqps::load_group_file(fixture("groups/" + name + ".json")));
  }
  return slot;
}

/// Left cosets of H with chosen representatives; coset_of[g] = index of gH.
struct Cosets {
  std::vector<Element> reps;
  std::vector<int> coset_of;
};

inline Cosets left_cosets(const FiniteGroup& g, const SubgroupRef& h) {
  Cosets c;
  c.coset_of.assign(static_cast<std::size_t>(g.order()), -1);
  for (Element x = 0; x < g.order(); ++x) {
    if (c.coset_of[static_cast<std::size_t>(x)] >= 0) {
      continue;
    }
    const int idx = static_cast<int>(c.reps.size());
    c.reps.push_back(x);
    for (Element y : h.elements) {
      c.coset_of[static_cast<std::size_t>(g.mul(x, y))] = idx;
    }
  }
  return c;
}

inline SubgroupRef intersect(const SubgroupRef& a, const SubgroupRef& b) {
  SubgroupRef out;
  std::set_intersection(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(),
                        std::back_inserter(out.elements));
  return out;
}

/// [G/H][G/K] = sum over double cosets HxK of [G/(H n xKx^-1)].
inline eqps::BurnsideElement double_coset_product(const eqps::BurnsideRing& br, int c, int d) {
  const auto& cat = br.catalog();
  const auto& g = cat.group();
  const auto& h = cat.representative(c);
  const auto& k = cat.representative(d);
  std::vector<bool> seen(static_cast<std::size_t>(g.order()), false);
  eqps::BurnsideElement out;
  for (Element x = 0; x < g.order(); ++x) {
    if (seen[static_cast<std::size_t>(x)]) {
      continue;
    }
    for (Element a : h.elements) {
      for (Element b : k.elements) {
        seen[static_cast<std::size_t>(g.mul(g.mul(a, x), b))] = true;
      }
    }
    out.add_term(cat.class_of(intersect(h, eqps::conjugate_subgroup(g, x, k))), 1);
  }
  return out;
}

/// One point gH of G/H with its isotropy gHg^-1 and the transported character.
struct Point {
  SubgroupRef isotropy;
  std::vector<int> values;  // aligned with isotropy.elements, units of 1/|G|
};

inline std::vector<Point> coset_points(const FiniteGroup& g, const SubgroupRef& h, const CharacterQZ& alpha,
                                       const Cosets& cos) {
  std::vector<Point> out;
  for (Element r : cos.reps) {
    Point p;
    for (Element x : h.elements) {
      p.isotropy.elements.push_back(g.conj(r, x));
    }
    std::sort(p.isotropy.elements.begin(), p.isotropy.elements.end());
    for (Element b : p.isotropy.elements) {
      p.values.push_back(alpha.at(g.mul(g.mul(g.inv(r), b), r)));
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline int value_at(const Point& p, Element b) {
  const auto it = std::lower_bound(p.isotropy.elements.begin(), p.isotropy.elements.end(), b);
  return p.values[static_cast<std::size_t>(it - p.isotropy.elements.begin())];
}

/// Product of two classes by enumerating orbits of pairs of cosets.
inline TBElement equipped_product(const TildeBurnsideRing& ring, TBClass x, TBClass y) {
  const auto& g = ring.group();
  const int n = g.order();
  const auto hx = ring.subgroup(x);
  const auto hy = ring.subgroup(y);
  const Cosets cx = left_cosets(g, hx);
  const Cosets cy = left_cosets(g, hy);
  const auto px = coset_points(g, hx, ring.character(x), cx);
  const auto py = coset_points(g, hy, ring.character(y), cy);
  const std::size_t nx = cx.reps.size();
  const std::size_t ny = cy.reps.size();
  std::vector<bool> seen(nx * ny, false);
  TBElement out;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      if (seen[i * ny + j]) {
        continue;
      }
      for (Element a = 0; a < n; ++a) {
        const auto ai = static_cast<std::size_t>(cx.coset_of[static_cast<std::size_t>(g.mul(a, cx.reps[i]))]);
        const auto aj = static_cast<std::size_t>(cy.coset_of[static_cast<std::size_t>(g.mul(a, cy.reps[j]))]);
        seen[ai * ny + aj] = true;
      }
      const SubgroupRef stab = intersect(px[i].isotropy, py[j].isotropy);
      CharacterQZ chi{stab, {}};
      for (Element b : stab.elements) {
        chi.values.push_back((value_at(px[i], b) + value_at(py[j], b)) % n);
      }
      out.add_term(ring.class_of(stab, chi).id, 1);
    }
  }
  return out;
}

/// S^k of one class by listing all size-k multisets of cosets. The
/// stabilizer character of a multiset sum mu_i (r_i H) at h is
/// sum mu_i alpha(eta_i), where h r_i = r_j eta_i with eta_i in H.
inline TBElement brute_symmetric_power(const TildeBurnsideRing& ring, TBClass c, int k) {
  const auto& g = ring.group();
  const int n = g.order();
  const auto h = ring.subgroup(c);
  const auto& alpha = ring.character(c);
  const Cosets cos = left_cosets(g, h);
  const int m = static_cast<int>(cos.reps.size());

  std::vector<std::vector<int>> all;
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  const auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == m - 1) {
      counts[static_cast<std::size_t>(i)] = left;
      all.push_back(counts);
      return;
    }
    for (int c0 = 0; c0 <= left; ++c0) {
      counts[static_cast<std::size_t>(i)] = c0;
      self(self, i + 1, left - c0);
    }
  };
  rec(rec, 0, k);

  const auto act = [&](Element a, const std::vector<int>& v) {
    std::vector<int> w(v.size(), 0);
    for (int i = 0; i < m; ++i) {
      w[static_cast<std::size_t>(cos.coset_of[static_cast<std::size_t>(g.mul(a, cos.reps[static_cast<std::size_t>(i)]))])] +=
          v[static_cast<std::size_t>(i)];
    }
    return w;
  };

  std::set<std::vector<int>> done;
  TBElement out;
  for (const auto& v : all) {
    if (done.count(v)) {
      continue;
    }
    SubgroupRef stab;
    for (Element a = 0; a < n; ++a) {
      const auto w = act(a, v);
      done.insert(w);
      if (w == v) {
        stab.elements.push_back(a);
      }
    }
    CharacterQZ chi{stab, {}};
    for (Element a : stab.elements) {
      int total = 0;
      for (int i = 0; i < m; ++i) {
        const int mu = v[static_cast<std::size_t>(i)];
        if (mu == 0) {
          continue;
        }
        const Element ar = g.mul(a, cos.reps[static_cast<std::size_t>(i)]);
        const Element rj = cos.reps[static_cast<std::size_t>(cos.coset_of[static_cast<std::size_t>(ar)])];
        const Element eta = g.mul(g.inv(rj), ar);
        total = (total + mu * alpha.at(eta)) % n;
      }
      chi.values.push_back(total);
    }
    out.add_term(ring.class_of(stab, chi).id, 1);
  }
  return out;
}

inline TBElement random_element(std::mt19937_64& rng, const TildeBurnsideRing& ring, int max_terms = 4,
                                std::int64_t max_coeff = 3) {
  TBElement out;
  const int terms = std::uniform_int_distribution<int>(0, max_terms)(rng);
  for (int i = 0; i < terms; ++i) {
    out += ring.from_class(TBClass{std::uniform_int_distribution<int>(0, ring.class_count() - 1)(rng)},
                           std::uniform_int_distribution<std::int64_t>(-max_coeff, max_coeff)(rng));
  }
  return out;
}

inline TBElement random_effective(std::mt19937_64& rng, const TildeBurnsideRing& ring, int max_terms = 2) {
  TBElement out;
  const int terms = std::uniform_int_distribution<int>(1, max_terms)(rng);
  for (int i = 0; i < terms; ++i) {
    out += ring.from_class(TBClass{std::uniform_int_distribution<int>(0, ring.class_count() - 1)(rng)}, 1);
  }
  return out;
}

}  // namespace oracle
