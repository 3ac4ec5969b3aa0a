#pragma once

// Cauchy-product kernels. The serial kernel is the reference; the OpenMP
// kernel splits the left operand across threads, accumulates into
// thread-local maps and merges them in thread order, so its result is
// identical to the serial one.

#include <cstddef>
#include <memory>

#include "eqps/series.hpp"

namespace eqps {

template <class Ring>
MultiSeries<Ring> series_mul_serial(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b);

template <class Ring>
MultiSeries<Ring> series_mul_parallel(const MultiSeries<Ring>& a, const MultiSeries<Ring>& b);

/// Expands every factor independently (in parallel), then multiplies the
/// expansions together in factor order.
TBSeries expand_parallel(std::shared_ptr<const TildeBurnsideRing> ring, const FactoredSeries& f,
                         const MultiDegree& bound);

/// Product of term counts above which series_mul uses the parallel kernel.
std::size_t parallel_threshold();
void set_parallel_threshold(std::size_t pairs);

/// Number of threads the parallel kernels would use (1 without OpenMP).
int kernel_threads();

}  // namespace eqps
