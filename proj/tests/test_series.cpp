#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"
#include "eqps/series.hpp"
#include "oracles.hpp"

using namespace eqps;

namespace {

MultiDegree deg(std::vector<int> e) { return MultiDegree(std::move(e)); }

std::shared_ptr<const IntegerRing> integers() { return std::make_shared<const IntegerRing>(); }

ZSeries z_poly(const MultiDegree& bound, const std::vector<std::pair<MultiDegree, std::int64_t>>& terms) {
  ZSeries out(integers(), bound);
  for (const auto& [d, c] : terms) {
    out.add_term(d, c);
  }
  return out;
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  std::int64_t out = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    out = out * (n - k + i) / i;
  }
  return out;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("monomials and bounds") {
  CHECK(monomial_string(deg({0})) == "1");
  CHECK(monomial_string(deg({3})) == "t^3");
  CHECK(monomial_string(deg({2, 1})) == "t1^2*t2");
  CHECK(parse_monomial("t1^2*t2", 2) == deg({2, 1}));
  CHECK(parse_monomial("t^3", 1) == deg({3}));
  CHECK(parse_monomial("1", 3) == deg({0, 0, 0}));
  CHECK(parse_bound("4,4") == deg({4, 4}));
  CHECK_THROWS_AS(parse_monomial("t3", 2), ParseError);
  CHECK_THROWS_AS(parse_bound("4,x"), ParseError);
  CHECK(graded_less(deg({0, 2}), deg({3, 0})));
  CHECK(graded_less(deg({1, 1}), deg({2, 0})));
}

TEST_CASE("coefficients of (1 - t)^{-[X]} are symmetric powers") {
  for (const char* name : {"z2", "z3", "s3", "v4"}) {
    CAPTURE(name);
    const auto ring = oracle::ring(name);
    for (int c = 0; c < ring->class_count(); ++c) {
      const TBClass cls{c};
      const auto e = expand_binomial(ring, BinomialFactor{deg({1}), 1, cls}, deg({4}));
      for (int k = 0; k <= 4; ++k) {
        CHECK(e.coefficient(deg({k})) == (k == 0 ? ring->one() : oracle::brute_symmetric_power(*ring, cls, k)));
      }
    }
  }
}

TEST_CASE("rhohat of a binomial is the integer binomial") {
  for (const char* name : {"z2", "s3", "d4"}) {
    const auto ring = oracle::ring(name);
    for (int c = 0; c < ring->class_count(); ++c) {
      for (std::int64_t s : {-2, -1, 1, 3}) {
        const TBClass cls{c};
        const MultiDegree w = deg({1, 2});
        const MultiDegree bound = deg({5, 6});
        const auto index = ring->rhohat(ring->from_class(cls));
        CHECK(reduce_rhohat(expand_binomial(ring, BinomialFactor{w, s, cls}, bound)) ==
              expand_binomial_integer(w, s * index, bound));
      }
    }
  }
}

TEST_CASE("integer binomials by the closed form") {
  const auto e = expand_binomial_integer(deg({2}), 3, deg({10}));
  for (int k = 0; k <= 10; ++k) {
    CHECK(e.coefficient(deg({k})) == (k % 2 == 0 ? binomial(k / 2 + 2, 2) : 0));
  }
  const auto f = expand_binomial_integer(deg({1}), -4, deg({6}));
  for (int k = 0; k <= 6; ++k) {
    CHECK(f.coefficient(deg({k})) == (k <= 4 ? (k % 2 ? -1 : 1) * binomial(4, k) : 0));
  }
}

TEST_CASE("inverse of 1 - t") {
  const auto p = z_poly(deg({7}), {{deg({0}), 1}, {deg({1}), -1}});
  const auto q = series_inverse(p);
  for (int k = 0; k <= 7; ++k) {
    CHECK(q.coefficient(deg({k})) == 1);
  }
  CHECK(series_mul(p, q) == ZSeries::one(integers(), deg({7})));
  CHECK(series_pow(p, -2).coefficient(deg({5})) == 6);
  CHECK(series_pow(p, 3) == series_mul(p, series_mul(p, p)));
  CHECK_THROWS_AS(series_inverse(z_poly(deg({3}), {{deg({0}), 2}})), MathError);
  CHECK_THROWS_AS(series_mul(p, ZSeries::one(integers(), deg({6}))), MathError);
}

TEST_CASE("inverse over tildeA") {
  std::mt19937_64 rng(17);
  const auto ring = oracle::ring("s3");
  const MultiDegree bound = deg({3, 3});
  for (int trial = 0; trial < 10; ++trial) {
    TBSeries a = TBSeries::one(ring, bound);
    for (int i = 0; i < 3; ++i) {
      a.add_term(deg({std::uniform_int_distribution<int>(0, 3)(rng), std::uniform_int_distribution<int>(1, 3)(rng)}),
                 oracle::random_element(rng, *ring));
    }
    CHECK(series_mul(a, series_inverse(a)) == TBSeries::one(ring, bound));
  }
}

TEST_CASE("monomial substitution") {
  const auto ring = oracle::ring("z2");
  const TBClass sigma = ring->parse_class("[G/G]_{a1}");
  const TBClass free = ring->parse_class("[G/e]");
  const auto a = expand_binomial(ring, BinomialFactor{deg({1}), 1, sigma}, deg({6}));
  const auto b = expand_binomial(ring, BinomialFactor{deg({2}), -1, free}, deg({6}));
  const std::vector<MultiDegree> images{deg({1, 2})};
  const MultiDegree target = deg({6, 12});
  CHECK(substitute_monomial(a, images, target) ==
        expand_binomial(ring, BinomialFactor{deg({1, 2}), 1, sigma}, target));
  CHECK(substitute_monomial(series_mul(a, b), images, target) ==
        series_mul(substitute_monomial(a, images, target), substitute_monomial(b, images, target)));
  CHECK_THROWS_AS(substitute_monomial(a, {deg({0, 0})}, target), MathError);
}

TEST_CASE("truncation") {
  const auto e = expand_binomial_integer(deg({1, 1}), 1, deg({4, 4}));
  const auto t = truncate(e, deg({2, 3}));
  CHECK(t.bound() == deg({2, 3}));
  CHECK(t.terms().size() == 3);
  CHECK(t.coefficient(deg({2, 2})) == 1);
}

TEST_CASE("factorization") {
  const auto ring = oracle::ring("s3");
  const MultiDegree bound = deg({8, 8});
  CHECK(factorize(TBSeries::one(ring, bound)).empty());

  const FactoredSeries f(2, {BinomialFactor{deg({1, 0}), 1, ring->parse_class("[G/H1]_{a1}")},
                             BinomialFactor{deg({1, 1}), -2, ring->parse_class("[G/e]")},
                             BinomialFactor{deg({0, 3}), 1, ring->parse_class("[G/H2]_{a1}")},
                             BinomialFactor{deg({2, 1}), 3, ring->parse_class("[G/G]_{a1}")}});
  REQUIRE(f.factors().size() == 4);
  CHECK(factorize(expand(ring, f, bound)) == f);

  TBSeries two(ring, bound);
  two.add_term(deg({0, 0}), ring->one().scaled(2));
  CHECK_THROWS_AS(factorize(two), MathError);

  // Merging and cancelling in the constructor.
  const TBClass g = ring->parse_class("[G/G]");
  const FactoredSeries merged(1, {BinomialFactor{deg({1}), 2, g}, BinomialFactor{deg({1}), -2, g}});
  CHECK(merged.empty());
}

TEST_CASE("reductions commute with products") {
  std::mt19937_64 rng(23);
  const auto ring = oracle::ring("z4");
  const auto aq = std::make_shared<const BurnsideQRing>(ring->burnside_ptr());
  const MultiDegree bound = deg({5});
  for (int trial = 0; trial < 10; ++trial) {
    TBSeries a(ring, bound);
    TBSeries b(ring, bound);
    for (int k = 0; k <= 5; ++k) {
      a.add_term(deg({k}), oracle::random_element(rng, *ring, 2, 2));
      b.add_term(deg({k}), oracle::random_element(rng, *ring, 2, 2));
    }
    const auto ab = series_mul(a, b);
    CHECK(reduce_rhohat(ab) == series_mul(reduce_rhohat(a), reduce_rhohat(b)));
    CHECK(reduce_eps(ab) == series_mul(reduce_eps(a), reduce_eps(b)));
    CHECK(reduce_rho(ab, aq) == series_mul(reduce_rho(a, aq), reduce_rho(b, aq)));
  }
}

TEST_CASE("serialization round trips") {
  const auto ring = oracle::ring("z6");
  const FactoredSeries f(2, {BinomialFactor{deg({1, 2}), -1, TBClass{3}}, BinomialFactor{deg({0, 1}), 2, TBClass{7}}});
  CHECK(factored_from_text(*ring, factored_to_text(*ring, f), 2) == f);
  CHECK(factored_from_json(*ring, factored_to_json(*ring, f)) == f);
  CHECK(factored_to_text(*ring, FactoredSeries(1)) == "1");

  const auto e = expand(ring, f, deg({3, 3}));
  CHECK(series_from_json(series_to_json(e), ring) == e);
  const auto z = expand_binomial_integer(deg({1}), 2, deg({4}));
  CHECK(series_from_json(series_to_json(z), integers()) == z);
  CHECK(series_to_text(z) == "1: 1\nt: 2\nt^2: 3\nt^3: 4\nt^4: 5\n");

  const auto z2 = oracle::ring("z2");
  CHECK(factored_to_text(*z2, FactoredSeries(1, {BinomialFactor{deg({1}), 1, z2->parse_class("[G/G]_{a1}")}})) ==
        "(1 - t)^{-[G/G]_{a1}}");
  CHECK_THROWS_AS(factored_from_text(*z2, "(1 - t)^{-[G/H4]}", 1), ParseError);
}

}  // TEST_SUITE
