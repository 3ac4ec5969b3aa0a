#include <doctest.h>

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"
#include "eqps/resolution.hpp"
#include "oracles.hpp"

using namespace eqps;
using nlohmann::json;

namespace {

const json kZ2 = json::parse(R"({"table": [[0,1],[1,0]]})");
const json kZ1 = json::parse(R"({"table": [[0]]})");

/// Chain 0 - 1 - 2 with self-intersections -1, -3, -1; Z2 swaps the ends.
/// m = [[2,1,1],[1,1,1],[1,1,2]]. One curvette on vertex 0.
json swapped_chain() {
  return json{{"group", kZ2},
              {"r", 1},
              {"vertices", {0, 1, 2}},
              {"self_int", {{"0", -1}, {"1", -3}, {"2", -1}}},
              {"edges", {{0, 1}, {1, 2}}},
              {"action", {{"1", {2, 1, 0}}}},
              {"valuations", {{{"i", 1}, {"kind", "curve"}, {"component", 0}}}},
              {"strata", {{{"id", "P"}, {"component", 0}, {"chi", 1}, {"H", {0}}, {"Hhat", {0}}},
                          {{"id", "Q"}, {"component", 1}, {"chi", 1}, {"H", {0, 1}}, {"Hhat", {0}}}}}};
}

bool mentions(const ValidationReport& r, const std::string& text) {
  return std::any_of(r.failures.begin(), r.failures.end(),
                     [&](const std::string& f) { return f.find(text) != std::string::npos; });
}

/// omega_i summed over the group orbit of delta directly.
MultiDegree omega_oracle(const ResolutionData& res, const MultMatrix& m, const Stratum& s) {
  MultiDegree out = MultiDegree::zero(res.r);
  for (const auto& v : res.valuations) {
    for (const auto& row : res.graph.action) {
      out.exponents[static_cast<std::size_t>(v.index - 1)] += static_cast<int>(
          m[static_cast<std::size_t>(v.component)][static_cast<std::size_t>(row[static_cast<std::size_t>(s.component)])]);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("resolution") {

TEST_CASE("multiplicity matrices") {
  auto one = load_resolution(json{{"group", kZ1}, {"r", 1}, {"vertices", {7}}, {"self_int", {{"7", -1}}},
                                  {"valuations", {{{"i", 1}, {"kind", "curve"}, {"component", 7}}}},
                                  {"strata", json::array()}});
  CHECK(multiplicity_matrix(one.graph) == MultMatrix{{1}});

  CHECK(multiplicity_matrix(load_resolution_file(oracle::fixture("resolutions/chain2.json")).graph) ==
        MultMatrix{{1, 1}, {1, 2}});
  CHECK(multiplicity_matrix(load_resolution_file(oracle::fixture("resolutions/trefoil.json")).graph) ==
        MultMatrix{{1, 1, 2}, {1, 2, 3}, {2, 3, 6}});
  CHECK(multiplicity_matrix(load_resolution(swapped_chain()).graph) == MultMatrix{{2, 1, 1}, {1, 1, 1}, {1, 1, 2}});

  // Two disjoint (-1)-curves: m is the identity, which is not positive.
  auto apart = swapped_chain();
  apart.erase("edges");
  apart["vertices"] = {0, 2};
  apart["self_int"] = {{"0", -1}, {"2", -1}};
  apart["action"] = {{"1", {2, 0}}};
  apart["strata"] = json::array();
  CHECK_THROWS_AS(multiplicity_matrix(load_resolution(apart).graph), ValidationError);

  one.graph.self_int[0] = -2;
  CHECK_THROWS_AS(multiplicity_matrix(one.graph), ValidationError);
}

TEST_CASE("omega and n on worked examples") {
  const auto res = load_resolution(swapped_chain());
  CHECK(validate(res).ok());
  const auto m = multiplicity_matrix(res.graph);
  CHECK(omega_vector(res, m, res.strata[0]) == MultiDegree({3}));
  CHECK(n_value(res, m, res.strata[0]) == 2);
  CHECK(omega_vector(res, m, res.strata[1]) == MultiDegree({2}));
  CHECK(n_value(res, m, res.strata[1]) == 1);

  const auto chain = load_resolution_file(oracle::fixture("resolutions/chain2.json"));
  const auto mc = multiplicity_matrix(chain.graph);
  CHECK(omega_vector(chain, mc, chain.strata[0]) == MultiDegree({1, 1}));
  CHECK(omega_vector(chain, mc, chain.strata[1]) == MultiDegree({2, 2}));
  CHECK(n_value(chain, mc, chain.strata[1]) == 4);

  const auto scalar = load_resolution_file(oracle::fixture("resolutions/z2_scalar.json"));
  CHECK(omega_vector(scalar, multiplicity_matrix(scalar.graph), scalar.strata[0]) == MultiDegree({2, 2}));
}

TEST_CASE("omega agrees with the orbit sum on every fixture") {
  for (const char* name : {"z2_scalar", "z3_free", "z6_x6_a", "z6_x6_b", "chain2", "trefoil", "z2_cusp"}) {
    CAPTURE(name);
    const auto res = load_resolution_file(oracle::fixture(std::string("resolutions/") + name + ".json"));
    REQUIRE(validate(res).ok());
    const auto m = multiplicity_matrix(res.graph);
    for (const auto& s : res.strata) {
      const auto w = omega_vector(res, m, s);
      CHECK(w == omega_oracle(res, m, s));
      std::int64_t direct = 0;
      for (const auto& v : res.valuations) {
        direct += m[static_cast<std::size_t>(v.component)][static_cast<std::size_t>(s.component)];
      }
      CHECK(n_value(res, m, s) == direct);
    }
  }
}

TEST_CASE("validation failures are reported") {
  auto j = swapped_chain();
  j["strata"][0]["H"] = {0, 1};
  CHECK(mentions(validate(load_resolution(j)), "does not stabilize"));

  j = swapped_chain();
  j["strata"][0]["Hhat"] = {1};
  CHECK(mentions(validate(load_resolution(j)), "Hhat"));

  j = swapped_chain();
  j.erase("self_int");
  CHECK_THROWS_AS(load_resolution(j), ParseError);

  j = swapped_chain();
  j.erase("edges");
  j["adjacency"] = {{0, 1, 0}, {0, 0, 1}, {0, 1, 0}};
  CHECK(mentions(validate(load_resolution(j)), "not symmetric"));

  j = swapped_chain();
  j["self_int"]["2"] = -2;
  CHECK(mentions(validate(load_resolution(j)), "not invariant"));

  j = swapped_chain();
  j["smooth_chi"] = {{"0", 5}};
  const auto report = validate(load_resolution(j));
  CHECK(mentions(report, "declared 5"));
  CHECK_THROWS_AS(require_valid(load_resolution(j)), ValidationError);

  j = swapped_chain();
  j["strata"][0]["component"] = 9;
  CHECK_THROWS_AS(load_resolution(j), ParseError);
}

TEST_CASE("group paths resolve relative to the file") {
  const auto res = load_resolution_file(oracle::fixture("resolutions/z6_x6_a.json"));
  CHECK(res.group().order() == 6);
  CHECK(res.r == 6);
  CHECK(res.nonequivariant.has_value());
}

}  // TEST_SUITE
