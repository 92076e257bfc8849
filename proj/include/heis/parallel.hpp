#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace heis {

/// Number of worker threads used by parallel_for (default: hardware concurrency,
/// overridable with HEIS_THREADS).
unsigned worker_count();
void set_worker_count(unsigned workers);

/// Runs body(begin, end) over [0, n) split into chunks of `grain` items.
/// Chunk boundaries depend only on n and grain, never on the worker count;
/// callers that write per-item outputs therefore get identical results for
/// any number of workers. If chunks throw, the exception from the lowest
/// chunk is rethrown.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

/// Pairwise (cascade) summation with a fixed recursion shape.
double pairwise_sum(std::span<const double> values);

}  // namespace heis
