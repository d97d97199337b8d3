#pragma once

#include <cstddef>
#include <functional>

namespace dirnet {

/// Worker count: DIRNET_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Callers write
/// results into per-index slots and reduce them in index order afterwards, so
/// the outcome never depends on the schedule. The first exception thrown by a
/// body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dirnet
