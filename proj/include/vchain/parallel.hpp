#pragma once

#include <cstddef>
#include <functional>

namespace vchain {

/// Worker count: VLASOV_CHAR_THREADS caps the pool, 0 or unset means auto.
size_t worker_count();

/// Runs fn(begin, end) over disjoint chunks of [0, n) on the worker pool.
/// Chunks are contiguous, so index-addressed output stays deterministic.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn);

}  // namespace vchain
