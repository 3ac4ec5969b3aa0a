#include <doctest.h>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"
#include "eqps/invariants.hpp"
#include "oracles.hpp"

using namespace eqps;

namespace {

ResolutionData fixture_resolution(const std::string& name) {
  return load_resolution_file(oracle::fixture("resolutions/" + name + ".json"));
}

MultiDegree deg(std::vector<int> e) { return MultiDegree(std::move(e)); }

}  // namespace

TEST_SUITE("invariants") {

TEST_CASE("trefoil over the trivial group") {
  const auto res = fixture_resolution("trefoil");
  const auto p = poincare_from_resolution(res, deg({8}));
  const auto& ring = *res.ring;
  CHECK(factored_to_text(ring, p.factored) == "(1 - t^2)^{-[G/G]} * (1 - t^3)^{-[G/G]} * (1 - t^6)^{[G/G]}");
  // Semigroup <2, 3>: every degree except 1.
  for (int k = 0; k <= 8; ++k) {
    CHECK(p.expansion.coefficient(deg({k})) == (k == 1 ? ring.zero() : ring.one()));
  }
  const auto z = zeta_from_resolution(res);
  CHECK(zeta_to_text(ring.burnside(), z.zeta) == "(1 - t^2)^{-[G/G]} * (1 - t^3)^{-[G/G]} * (1 - t^6)^{[G/G]}");
  CHECK(z.zeta == FactoredZeta(FactoredZeta::Variant::Zeta, z.zeta_tilde.factors()));
  CHECK(recover_zeta(ring, p.factored, RecoveryMode::Free).zetas == z);
}

TEST_CASE("Z2 scalar action") {
  const auto res = fixture_resolution("z2_scalar");
  const auto p = poincare_from_resolution(res, deg({4, 4}));
  const auto& ring = *res.ring;
  CHECK(p.factored ==
        FactoredSeries(2, {BinomialFactor{deg({2, 2}), 1, ring.parse_class("[G/G]_{a1}")}}));
  CHECK(p.expansion.terms().size() == 3);
  const auto z = zeta_from_resolution(res);
  CHECK(zeta_to_text(ring.burnside(), z.zeta) == "(1 - t^2)^{-(1/2)[G/e]}");
  CHECK(zeta_to_text(ring.burnside(), z.zeta_tilde) == "(1 - t)^{-[G/e]}");
  CHECK(recover_zeta(ring, factorize(p.expansion), RecoveryMode::Free).zetas == z);
}

TEST_CASE("free recovery of the Z3 example") {
  const auto res = fixture_resolution("z3_free");
  const auto p = poincare_from_resolution(res, deg({3, 3, 3}));
  const auto rec = recover_zeta(*res.ring, factorize(p.expansion), RecoveryMode::Free);
  CHECK(rec.zetas == zeta_from_resolution(res));
  CHECK(rec.warnings.empty());
}

TEST_CASE("empty series recovers to 1") {
  const auto ring = oracle::ring("s3");
  for (auto mode : {RecoveryMode::Free, RecoveryMode::General}) {
    const auto rec = recover_zeta(*ring, FactoredSeries(2), mode);
    CHECK(rec.zetas.zeta.empty());
    CHECK(rec.zetas.zeta_tilde.empty());
  }
  CHECK(zeta_to_text(ring->burnside(), FactoredZeta()) == "1");
}

TEST_CASE("general recovery warns on a nontrivial character") {
  const auto res = fixture_resolution("z2_cusp");
  const auto p = poincare_from_resolution(res, deg({12}));
  const auto rec = recover_zeta(*res.ring, p.factored, RecoveryMode::General);
  CHECK(!rec.selections.empty());
  CHECK(parse_recovery_mode("free") == RecoveryMode::Free);
  CHECK_THROWS_AS(parse_recovery_mode("fast"), ParseError);
}

TEST_CASE("rhohat against the non-equivariant series") {
  for (const char* name : {"z2_scalar", "z3_free", "chain2", "trefoil", "z2_cusp"}) {
    CAPTURE(name);
    const auto res = fixture_resolution(name);
    REQUIRE(res.nonequivariant);
    MultiDegree bound(std::vector<int>(static_cast<std::size_t>(res.r), res.r == 1 ? 12 : 4));
    const auto p = poincare_from_resolution(res, bound);
    const int arity = res.group().order() * res.r;
    CHECK(statement1_rhohat_check(res.ring, p.factored, *res.nonequivariant, arity, bound));

    auto perturbed = *res.nonequivariant;
    perturbed.front().e += 1;
    CHECK_FALSE(statement1_rhohat_check(res.ring, p.factored, perturbed, arity, bound));
  }
}

TEST_CASE("eps reduction") {
  const auto ring = oracle::ring("z2");
  const FactoredSeries free(1, {BinomialFactor{deg({1}), 1, ring->parse_class("[G/e]")}});
  const auto e = eps_reduction(ring, free, deg({9}));
  for (int k = 0; k <= 9; ++k) {
    CHECK(e.coefficient(deg({k})) == (k % 2 == 0 ? ring->r1().one() : R1Element{}));
  }
  const FactoredSeries sigma(1, {BinomialFactor{deg({2}), -1, ring->parse_class("[G/G]_{a1}")}});
  const FactoredSeries both(1, {free.factors()[0], sigma.factors()[0]});
  CHECK(eps_reduction(ring, both, deg({9})) ==
        series_mul(eps_reduction(ring, free, deg({9})), eps_reduction(ring, sigma, deg({9}))));
}

TEST_CASE("zeta factors") {
  const auto ring = oracle::ring("z6");
  const auto& bs = ring->burnside();
  const FactoredZeta z(FactoredZeta::Variant::Zeta,
                       {ZetaFactor{Rational(6), Rational(1, 3), 1}, ZetaFactor{Rational(6), Rational(2, 3), 1},
                        ZetaFactor{Rational(2), Rational(-1), 0}, ZetaFactor{Rational(3, 2), Rational(0), 2}});
  REQUIRE(z.factors().size() == 2);
  CHECK(z.factors()[0].n == Rational(2));
  CHECK(z.factors()[1].q == Rational(1));
  CHECK(zeta_from_text(bs, FactoredZeta::Variant::Zeta, zeta_to_text(bs, z)) == z);
  CHECK(zeta_from_json(bs, zeta_to_json(bs, z)) == z);
  CHECK_THROWS_AS(FactoredZeta(FactoredZeta::Variant::ZetaTilde, {ZetaFactor{Rational(3, 2), Rational(1), 0}}),
                  MathError);
}

}  // TEST_SUITE
