#ifndef MDPROLATE_PARALLEL_HPP_
#define MDPROLATE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace mdprolate {

/// Worker count: MDPROLATE_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Indices are split into
/// contiguous blocks; the first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace mdprolate

#endif  // MDPROLATE_PARALLEL_HPP_
