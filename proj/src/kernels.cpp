#include "eqps/kernels.hpp"

#include <atomic>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eqps {

namespace {

std::atomic<std::size_t> g_threshold{4096};

template <class Ring>
using TermVec = std::vector<std::pair<MultiDegree, typename Ring::value_type>>;

template <class Ring>
void accumulate(const Ring& ring, const MultiDegree& bound, const MultiDegree& da,
                const typename Ring::value_type& ca, const MultiSeries<Ring>& b,
                std::map<MultiDegree, typename Ring::value_type>& acc) {
  for (const auto& [db, cb] : b.terms()) {
    MultiDegree d = da + db;
    if (!d.fits(bound)) {
      continue;
    }
    auto prod = ring.mul(ca, cb);
    auto [it, inserted] = acc.try_emplace(std::move(d), prod);
    if (!inserted) {
      it->second = ring.add(it->second, prod);
    }
  }
}

}  // namespace

std::size_t parallel_threshold() { return g_threshold.load(); }
void set_parallel_threshold(std::size_t pairs) { g_threshold.store(pairs); }

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class Ring>
MultiSeries<Ring> series_mul_serial(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b) {
  require_compatible(a, b, "series_mul");
  const auto& ring = a.ring();
  std::map<MultiDegree, typename Ring::value_type> acc;
  for (const auto& [da, ca] : a.terms()) {
    accumulate(ring, a.bound(), da, ca, b, acc);
  }
  MultiSeries<Ring> out(a.ring_ptr(), a.bound());
  for (const auto& [d, c] : acc) {
    out.add_term(d, c);
  }
  return out;
}

template <class Ring>
MultiSeries<Ring> series_mul_parallel(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b) {
  require_compatible(a, b, "series_mul");
  const auto& ring = a.ring();
  const TermVec<Ring> left(a.terms().begin(), a.terms().end());
  const long long n = static_cast<long long>(left.size());
  const int threads = kernel_threads();
  std::vector<std::map<MultiDegree, typename Ring::value_type>> partial(static_cast<std::size_t>(threads));
  std::vector<std::string> errors(static_cast<std::size_t>(threads));

  // Static chunks keep each thread's slice fixed, so the merge below sees
  // the same partial sums on every run.
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long long i = 0; i < n; ++i) {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    const auto& [da, ca] = left[static_cast<std::size_t>(i)];
    try {
      accumulate(ring, a.bound(), da, ca, b, partial[static_cast<std::size_t>(tid)]);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(tid)] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) {
      throw MathError(e);
    }
  }

  MultiSeries<Ring> out(a.ring_ptr(), a.bound());
  for (const auto& part : partial) {
    for (const auto& [d, c] : part) {
      out.add_term(d, c);
    }
  }
  return out;
}

TBSeries expand_parallel(std::shared_ptr<const TildeBurnsideRing> ring, const FactoredSeries& f,
                         const MultiDegree& bound) {
  if (f.arity() != bound.arity()) {
    throw MathError("expand: factored series arity differs from the bound");
  }
  const auto& factors = f.factors();
  const long long n = static_cast<long long>(factors.size());
  std::vector<TBSeries> pieces(factors.size(), TBSeries(ring, bound));
  std::vector<std::string> errors(factors.size());

#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    // Exceptions must not cross the parallel region.
    try {
      pieces[static_cast<std::size_t>(i)] = expand_binomial(ring, factors[static_cast<std::size_t>(i)], bound);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) {
      throw MathError(e);
    }
  }

  auto out = TBSeries::one(ring, bound);
  for (const auto& p : pieces) {
    out = series_mul(out, p);
  }
  return out;
}

#define EQPS_INSTANTIATE_KERNELS(R)                                                          \
  template MultiSeries<R> series_mul_serial<R>(const MultiSeries<R>&, const MultiSeries<R>&); \
  template MultiSeries<R> series_mul_parallel<R>(const MultiSeries<R>&, const MultiSeries<R>&);

EQPS_INSTANTIATE_KERNELS(TildeBurnsideRing)
EQPS_INSTANTIATE_KERNELS(BurnsideQRing)
EQPS_INSTANTIATE_KERNELS(R1Ring)
EQPS_INSTANTIATE_KERNELS(IntegerRing)

#undef EQPS_INSTANTIATE_KERNELS

}  // namespace eqps
