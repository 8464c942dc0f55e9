#pragma once

#include <cstddef>
#include <functional>

namespace qkm {

/// Worker cap: QKM_THREADS environment variable when set (minimum 1),
/// otherwise the hardware concurrency.
unsigned max_threads();

/// Runs fn(i) for i in [0, count) on up to max_threads() workers with static
/// contiguous chunking. Callers write to disjoint, preallocated slots, so
/// results never depend on the thread count. Exceptions from workers are
/// rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

} // namespace qkm
