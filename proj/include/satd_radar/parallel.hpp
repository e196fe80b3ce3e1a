#pragma once

#include <cstddef>
#include <functional>

namespace satd {

// Worker count: SATD_RADAR_THREADS if set and positive, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Work is
// split into contiguous blocks; callers write to disjoint slots so the
// result never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace satd
