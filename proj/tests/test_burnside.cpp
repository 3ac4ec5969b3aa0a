#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "eqps/burnside.hpp"
#include "eqps/error.hpp"
#include "oracles.hpp"

using namespace eqps;

TEST_SUITE("burnside") {

TEST_CASE("A(G) products agree with the double coset formula") {
  for (const char* name : {"z2", "z4", "v4", "s3", "z6", "d4", "q8", "a4", "d6"}) {
    CAPTURE(name);
    const auto ring = oracle::ring(name);
    const auto& bs = ring->burnside();
    const int n = bs.catalog().class_count();
    for (int c = 0; c < n; ++c) {
      for (int d = 0; d < n; ++d) {
        CHECK(bs.mul(BurnsideElement::basis(c), BurnsideElement::basis(d)) == oracle::double_coset_product(bs, c, d));
      }
    }
  }
}

TEST_CASE("class products agree with orbits of pairs of cosets") {
  for (const char* name : {"z2", "z3", "z4", "v4", "s3", "z6", "d4", "q8"}) {
    CAPTURE(name);
    const auto ring = oracle::ring(name);
    for (int x = 0; x < ring->class_count(); ++x) {
      for (int y = 0; y < ring->class_count(); ++y) {
        const TBClass cx{x};
        const TBClass cy{y};
        CHECK_MESSAGE(ring->class_product(cx, cy) == oracle::equipped_product(*ring, cx, cy),
                      ring->class_name(cx), " * ", ring->class_name(cy));
      }
    }
  }
}

TEST_CASE("symmetric powers agree with multisets of cosets") {
  for (const char* name : {"z2", "z3", "z4", "v4", "s3", "z6"}) {
    CAPTURE(name);
    const auto ring = oracle::ring(name);
    for (int c = 0; c < ring->class_count(); ++c) {
      for (int k = 1; k <= 4; ++k) {
        const TBClass cls{c};
        CHECK_MESSAGE(ring->symmetric_power(cls, k) == oracle::brute_symmetric_power(*ring, cls, k), "S^", k, " ",
                      ring->class_name(cls));
      }
    }
  }
}

TEST_CASE("small worked products over Z2") {
  const auto ring = oracle::ring("z2");
  const auto sigma = ring->parse("[G/G]_{a1}");
  const auto free = ring->parse("[G/e]");
  CHECK(ring->mul(sigma, free) == free);
  CHECK(ring->mul(sigma, sigma) == ring->one());
  CHECK(ring->mul(free, free) == free.scaled(2));
  CHECK(ring->symmetric_power(ring->parse_class("[G/e]"), 2) == ring->one() + free);
  CHECK(ring->symmetric_power(ring->parse_class("[G/G]_{a1}"), 3) == sigma);
  CHECK(ring->symmetric_power(ring->parse_class("[G/G]_{a1}"), 0) == ring->one());
}

TEST_CASE("reductions of single classes") {
  const auto ring = oracle::ring("s3");
  for (int c = 0; c < ring->class_count(); ++c) {
    const TBClass cls{c};
    const auto h = ring->subgroup(cls);
    CHECK(ring->rhohat(ring->from_class(cls)) == 6 / h.order());
    CHECK(ring->rho(ring->from_class(cls)) == BurnsideElement::basis(ring->info(cls).subgroup_class));
  }
  // eps keeps only classes with H = G.
  CHECK(ring->eps(ring->parse("[G/H1]_{a1}")).is_zero());
  CHECK(ring->eps(ring->parse("[G/G]_{a1}")) == R1Element::basis(1));
  CHECK(ring->r1().render(ring->eps(ring->parse("2*[G/G]_{a1} + [G/e]"))) == "2*[a1]");
}

TEST_CASE("ring laws on random elements") {
  std::mt19937_64 rng(11);
  for (const char* name : {"z2", "z4", "s3", "v4", "d4"}) {
    CAPTURE(name);
    const auto ring = oracle::ring(name);
    for (int trial = 0; trial < 30; ++trial) {
      const auto a = oracle::random_element(rng, *ring);
      const auto b = oracle::random_element(rng, *ring);
      const auto c = oracle::random_element(rng, *ring);
      CHECK(ring->mul(a, b) == ring->mul(b, a));
      CHECK(ring->mul(ring->mul(a, b), c) == ring->mul(a, ring->mul(b, c)));
      CHECK(ring->mul(a, b + c) == ring->mul(a, b) + ring->mul(a, c));
      CHECK(ring->mul(a, ring->one()) == a);
      CHECK(ring->rho(ring->mul(a, b)) == ring->burnside().mul(ring->rho(a), ring->rho(b)));
      CHECK(ring->rhohat(ring->mul(a, b)) == ring->rhohat(a) * ring->rhohat(b));
      CHECK(ring->eps(ring->mul(a, b)) == ring->r1().mul(ring->eps(a), ring->eps(b)));
    }
  }
}

TEST_CASE("symmetric powers of sums split") {
  std::mt19937_64 rng(5);
  for (const char* name : {"z2", "z3", "s3", "v4"}) {
    CAPTURE(name);
    const auto ring = oracle::ring(name);
    for (int trial = 0; trial < 8; ++trial) {
      const auto x = oracle::random_effective(rng, *ring);
      const auto y = oracle::random_effective(rng, *ring);
      const auto sx = ring->realize(x);
      const auto sy = ring->realize(y);
      const auto sxy = disjoint_union(sx, sy);
      for (int k = 0; k <= 3; ++k) {
        TBElement sum;
        for (int i = 0; i <= k; ++i) {
          sum += ring->mul(ring->symmetric_power(sx, i), ring->symmetric_power(sy, k - i));
        }
        CHECK(ring->symmetric_power(sxy, k) == sum);
      }
      CHECK(ring->orbit_decompose(cartesian_product(ring->group(), sx, sy)) == ring->mul(x, y));
    }
  }
}

TEST_CASE("realize and decompose are inverse") {
  const auto ring = oracle::ring("d4");
  for (int c = 0; c < ring->class_count(); ++c) {
    const TBClass cls{c};
    const auto x = ring->realize(cls);
    validate_equipped(ring->group(), x);
    CHECK(x.size == 8 / ring->subgroup(cls).order());
    CHECK(ring->orbit_decompose(x) == ring->from_class(cls));
  }
  CHECK_THROWS_AS(ring->realize(ring->parse("-[G/e]")), MathError);
}

TEST_CASE("validate_equipped rejects a character not fixed by the action") {
  const auto ring = oracle::ring("s3");
  auto x = ring->realize(ring->parse("[G/H1]_{a1}"));
  validate_equipped(ring->group(), x);
  for (auto& v : x.characters[0].values) {
    v = 0;
  }
  CHECK_THROWS_AS(validate_equipped(ring->group(), x), ValidationError);
}

TEST_CASE("text and JSON round trips") {
  std::mt19937_64 rng(3);
  for (const char* name : {"z6", "s3", "q8"}) {
    const auto ring = oracle::ring(name);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = oracle::random_element(rng, *ring);
      CHECK(ring->parse(ring->render(a)) == a);
      CHECK(ring->from_json(ring->to_json(a)) == a);
    }
    for (int c = 0; c < ring->class_count(); ++c) {
      CHECK(ring->parse_class(ring->class_name(TBClass{c})) == TBClass{c});
    }
  }
  const auto z2 = oracle::ring("z2");
  CHECK(z2->render(z2->one()) == "1");
  CHECK(z2->render(z2->zero()) == "0");
  CHECK_THROWS_AS(z2->parse("[G/H7]"), ParseError);
  CHECK_THROWS_AS(z2->parse("[G/G]_{a9}"), ParseError);
  CHECK_THROWS_AS(z2->parse("2*"), ParseError);
}

}  // TEST_SUITE
