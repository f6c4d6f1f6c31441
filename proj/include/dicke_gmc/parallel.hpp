#pragma once

#include <cstddef>
#include <functional>

namespace dicke {

/// Worker count for internal fan-out. Reads DICKE_GMC_THREADS (0 or unset = hardware concurrency).
unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is handled exactly once; callers write
/// results into per-index slots, so output never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace dicke
