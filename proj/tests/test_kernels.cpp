#include <doctest.h>

#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "eqps/kernels.hpp"
#include "oracles.hpp"

using namespace eqps;

namespace {

struct ThresholdGuard {
  std::size_t saved = parallel_threshold();
  ~ThresholdGuard() { set_parallel_threshold(saved); }
};

TBSeries random_series(std::mt19937_64& rng, const std::shared_ptr<const TildeBurnsideRing>& ring,
                       const MultiDegree& bound) {
  TBSeries out(ring, bound);
  for (int i = 0; i <= bound[0]; ++i) {
    for (int j = 0; j <= bound[1]; ++j) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) != 0) {
        out.add_term(MultiDegree({i, j}), oracle::random_element(rng, *ring, 3, 4));
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("parallel product equals the serial reference") {
#ifdef _OPENMP
  omp_set_num_threads(4);
#endif
  ThresholdGuard guard;
  set_parallel_threshold(0);
  std::mt19937_64 rng(29);
  for (const char* name : {"z2", "s3", "d4"}) {
    CAPTURE(name);
    const auto ring = oracle::ring(name);
    const MultiDegree bound({6, 5});
    for (int trial = 0; trial < 4; ++trial) {
      const auto a = random_series(rng, ring, bound);
      const auto b = random_series(rng, ring, bound);
      const auto serial = series_mul_serial(a, b);
      CHECK(series_mul_parallel(a, b) == serial);
      CHECK(series_mul(a, b) == serial);
    }
  }
}

TEST_CASE("parallel product over the integers") {
  ThresholdGuard guard;
  set_parallel_threshold(0);
  const auto a = expand_binomial_integer(MultiDegree({1, 2}), -3, MultiDegree({9, 9}));
  const auto b = expand_binomial_integer(MultiDegree({2, 1}), 5, MultiDegree({9, 9}));
  CHECK(series_mul_parallel(a, b) == series_mul_serial(a, b));
}

TEST_CASE("parallel expansion equals the serial expansion") {
#ifdef _OPENMP
  omp_set_num_threads(4);
#endif
  ThresholdGuard guard;
  set_parallel_threshold(0);
  const auto ring = oracle::ring("s3");
  const FactoredSeries f(2, {BinomialFactor{MultiDegree({1, 0}), 2, TBClass{1}},
                             BinomialFactor{MultiDegree({1, 1}), -1, TBClass{0}},
                             BinomialFactor{MultiDegree({0, 2}), 1, TBClass{4}},
                             BinomialFactor{MultiDegree({2, 3}), 3, TBClass{6}}});
  const MultiDegree bound({6, 6});
  CHECK(expand_parallel(ring, f, bound) == expand(ring, f, bound));
  CHECK(expand_parallel(ring, FactoredSeries(2), bound) == TBSeries::one(ring, bound));
}

TEST_CASE("thread count and threshold") {
  CHECK(kernel_threads() >= 1);
  ThresholdGuard guard;
  set_parallel_threshold(123);
  CHECK(parallel_threshold() == 123);
}

}  // TEST_SUITE
