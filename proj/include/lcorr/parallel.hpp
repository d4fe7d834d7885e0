#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lcorr {

/// Worker count: LCORR_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
std::size_t thread_count();

/// Calls fn(i) for every i in [0, n), split into contiguous blocks across
/// thread_count() workers. fn must only write to state owned by index i. If
/// calls throw, one of the exceptions is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Block boundaries used by parallel_for for n items: block b covers
/// [bounds[b], bounds[b+1]).
std::vector<std::size_t> partition_bounds(std::size_t n, std::size_t workers);

}  // namespace lcorr
