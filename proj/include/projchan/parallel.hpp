#pragma once

#include <cstddef>
#include <functional>

namespace projchan {

/// Worker cap: PROJCHAN_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is executed exactly once; callers
/// write results into per-index slots and reduce afterwards in index order,
/// which keeps results independent of scheduling. The first exception thrown
/// by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace projchan
