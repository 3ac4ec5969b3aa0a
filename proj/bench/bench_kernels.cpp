#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "eqps/burnside.hpp"
#include "eqps/group.hpp"
#include "eqps/kernels.hpp"

using namespace eqps;

namespace {

std::shared_ptr<const TildeBurnsideRing> s3_ring() {
  static const auto ring = TildeBurnsideRing::create(load_group_file(EQPS_FIXTURE_DIR "/groups/s3.json"));
  return ring;
}

TBSeries dense_series(int side, std::uint64_t seed) {
  const auto ring = s3_ring();
  std::mt19937_64 rng(seed);
  TBSeries out(ring, MultiDegree({side, side}));
  for (int i = 0; i <= side; ++i) {
    for (int j = 0; j <= side; ++j) {
      TBElement c;
      for (int t = 0; t < 3; ++t) {
        c += ring->from_class(TBClass{std::uniform_int_distribution<int>(0, ring->class_count() - 1)(rng)},
                              std::uniform_int_distribution<std::int64_t>(-3, 3)(rng));
      }
      out.add_term(MultiDegree({i, j}), c);
    }
  }
  return out;
}

FactoredSeries sample_factors() {
  return FactoredSeries(2, {BinomialFactor{MultiDegree({1, 0}), 2, TBClass{1}},
                            BinomialFactor{MultiDegree({0, 1}), -1, TBClass{0}},
                            BinomialFactor{MultiDegree({1, 1}), 1, TBClass{4}},
                            BinomialFactor{MultiDegree({2, 1}), 3, TBClass{6}},
                            BinomialFactor{MultiDegree({1, 2}), -2, TBClass{2}},
                            BinomialFactor{MultiDegree({3, 0}), 1, TBClass{5}}});
}

void BM_SeriesMulSerial(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto a = dense_series(side, 1);
  const auto b = dense_series(side, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(series_mul_serial(a, b));
  }
}

void BM_SeriesMulParallel(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto a = dense_series(side, 1);
  const auto b = dense_series(side, 2);
  state.counters["threads"] = kernel_threads();
  for (auto _ : state) {
    benchmark::DoNotOptimize(series_mul_parallel(a, b));
  }
}

void BM_ExpandSerial(benchmark::State& state) {
  const auto ring = s3_ring();
  const auto f = sample_factors();
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expand(ring, f, MultiDegree({side, side})));
  }
}

void BM_ExpandParallel(benchmark::State& state) {
  const auto ring = s3_ring();
  const auto f = sample_factors();
  const int side = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(expand_parallel(ring, f, MultiDegree({side, side})));
  }
}

}  // namespace

BENCHMARK(BM_SeriesMulSerial)->Arg(6)->Arg(12);
BENCHMARK(BM_SeriesMulParallel)->Arg(6)->Arg(12);
BENCHMARK(BM_ExpandSerial)->Arg(6)->Arg(10);
BENCHMARK(BM_ExpandParallel)->Arg(6)->Arg(10);

BENCHMARK_MAIN();
