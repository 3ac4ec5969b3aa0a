#include <doctest.h>

#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "eqps/error.hpp"
#include "eqps/group.hpp"
#include "oracles.hpp"

using namespace eqps;

namespace {

FiniteGroup group(const char* name) { return load_group_file(oracle::fixture(std::string("groups/") + name + ".json")); }

int divisor_count(int n) {
  int d = 0;
  for (int i = 1; i <= n; ++i) {
    d += n % i == 0;
  }
  return d;
}

/// Every subset closed under multiplication (exhaustive for small groups).
int brute_subgroup_count(const FiniteGroup& g) {
  const int n = g.order();
  int count = 0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (!(mask & 1u)) {
      continue;
    }
    bool closed = true;
    for (int a = 0; a < n && closed; ++a) {
      for (int b = 0; b < n && closed; ++b) {
        if ((mask >> a & 1u) && (mask >> b & 1u) && !(mask >> g.mul(a, b) & 1u)) {
          closed = false;
        }
      }
    }
    count += closed;
  }
  return count;
}

}  // namespace

TEST_SUITE("group") {

TEST_CASE("load from tables and generators") {
  const auto z2 = load_group(nlohmann::json::parse(R"({"table": [[0,1],[1,0]]})"));
  CHECK(z2.order() == 2);
  CHECK(z2.mul(1, 1) == 0);

  const auto s3 = load_group(nlohmann::json::parse(R"({"degree": 3, "permutation_generators": [[1,0,2],[1,2,0]]})"));
  CHECK(s3.order() == 6);

  CHECK_THROWS_AS(load_group(nlohmann::json::parse(R"({"table": [[0,1],[1,1]]})")), ValidationError);
  CHECK_THROWS_AS(load_group(nlohmann::json::parse(R"({"table": [[0,1],[1,2]]})")), ValidationError);
  CHECK_THROWS_AS(load_group(nlohmann::json::parse(R"({"tabel": []})")), ParseError);
}

TEST_CASE("non-associative table is rejected") {
  // Latin square with identity 0 and inverses, but (1*1)*2 != 1*(1*2).
  const auto desc = nlohmann::json::parse(R"({"table": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]})");
  CHECK_THROWS_AS(load_group(desc), ValidationError);
}

TEST_CASE("subgroup classes of small groups") {
  const auto z2 = group("z2");
  CHECK(subgroup_conjugacy_classes(z2).size() == 2);

  const auto s3 = group("s3");
  const auto cls = subgroup_conjugacy_classes(s3);
  REQUIRE(cls.size() == 4);
  std::vector<int> orders;
  std::size_t total = 0;
  for (const auto& c : cls) {
    orders.push_back(c.representative.order());
    total += c.members.size();
  }
  CHECK(orders == std::vector<int>{1, 2, 3, 6});
  CHECK(total == 6);

  const auto z4 = subgroup_conjugacy_classes(group("z4"));
  REQUIRE(z4.size() == 3);
  CHECK(z4[1].representative.order() == 2);
}

TEST_CASE("subgroup enumeration matches exhaustive closure") {
  for (const char* name : {"z2", "z3", "z4", "v4", "s3", "z5", "z6", "d4", "q8", "a4", "z12", "d6"}) {
    const auto g = group(name);
    CAPTURE(name);
    const auto subs = all_subgroups(g);
    CHECK(static_cast<int>(subs.size()) == brute_subgroup_count(g));
    for (const auto& h : subs) {
      CHECK(is_subgroup(g, h.elements));
    }
  }
  for (int n : {1, 2, 3, 4, 5, 6, 12}) {
    CHECK(static_cast<int>(all_subgroups(group(("z" + std::to_string(n)).c_str())).size()) == divisor_count(n));
  }
}

TEST_CASE("one-dimensional characters") {
  const auto z2 = group("z2");
  const auto chars = one_dim_characters(z2, whole_group(z2));
  REQUIRE(chars.size() == 2);
  CHECK(chars[0].is_trivial());
  CHECK(character_value(z2, chars[1], 1) == Rational(1, 2));

  const auto s3 = group("s3");
  CHECK(one_dim_characters(s3, whole_group(s3)).size() == 2);
  CHECK(one_dim_characters(s3, trivial_subgroup()).size() == 1);

  for (const char* name : {"z6", "q8", "a4", "d4"}) {
    const auto g = group(name);
    for (const auto& h : all_subgroups(g)) {
      for (const auto& chi : one_dim_characters(g, h)) {
        CHECK(is_character(g, chi));
      }
    }
  }
}

TEST_CASE("conjugate characters and kernels") {
  const auto s3 = group("s3");
  const auto cls = subgroup_conjugacy_classes(s3);
  const auto& c3 = cls[2].representative;
  const Element rot = c3.elements[1];
  Element transposition = 0;
  for (Element a = 0; a < s3.order(); ++a) {
    if (s3.element_order(a) == 2) {
      transposition = a;
      break;
    }
  }
  CharacterQZ alpha;
  for (const auto& chi : one_dim_characters(s3, c3)) {
    if (character_value(s3, chi, rot) == Rational(1, 3)) {
      alpha = chi;
    }
  }
  REQUIRE(!alpha.domain.elements.empty());
  const auto beta = conjugate_character(s3, transposition, alpha);
  CHECK(character_value(s3, beta, rot) == Rational(2, 3));
  CHECK(conjugate_character(s3, 0, alpha) == alpha);
  const auto trivial = one_dim_characters(s3, c3).front();
  CHECK(conjugate_character(s3, transposition, trivial).is_trivial());

  const auto z2 = group("z2");
  const auto sigma = one_dim_characters(z2, whole_group(z2))[1];
  CHECK(kernel(z2, sigma) == trivial_subgroup());
  CHECK(kernel(z2, one_dim_characters(z2, whole_group(z2))[0]) == whole_group(z2));

  const auto z4 = group("z4");
  const auto half = extend_character(z4, whole_group(z4), {{1, Rational(1, 2)}});
  CHECK(kernel(z4, half) == SubgroupRef{{0, 2}});
}

TEST_CASE("normalizers and canonical pairs") {
  const auto s3 = group("s3");
  CHECK(normalizer(s3, whole_group(s3)) == whole_group(s3));
  const auto t = subgroup_conjugacy_classes(s3)[1].representative;
  CHECK(normalizer(s3, t) == t);

  std::mt19937_64 rng(7);
  for (const char* name : {"s3", "d4", "a4", "q8", "d6"}) {
    const auto g = group(name);
    const auto subs = all_subgroups(g);
    for (int trial = 0; trial < 40; ++trial) {
      const auto& h = subs[std::uniform_int_distribution<std::size_t>(0, subs.size() - 1)(rng)];
      const auto chars = one_dim_characters(g, h);
      const auto& alpha = chars[std::uniform_int_distribution<std::size_t>(0, chars.size() - 1)(rng)];
      const Element a = std::uniform_int_distribution<int>(0, g.order() - 1)(rng);
      const auto base = canonical_pair(g, h, alpha);
      CHECK(canonical_pair(g, conjugate_subgroup(g, a, h), conjugate_character(g, a, alpha)) == base);
      CHECK(canonical_pair(g, base.first, base.second) == base);
      CHECK(is_conjugate_subgroup(g, h, conjugate_subgroup(g, a, h)));
    }
  }
}

TEST_CASE("catalog naming round trip") {
  const GroupCatalog cat(group("d4"));
  for (int c = 0; c < cat.class_count(); ++c) {
    CHECK(cat.parse_class_name(cat.class_name(c)) == c);
  }
  CHECK(cat.class_name(0) == "e");
  CHECK(cat.class_name(cat.whole_class()) == "G");
  CHECK_THROWS_AS(cat.parse_class_name("H99"), ParseError);
}

}  // TEST_SUITE
