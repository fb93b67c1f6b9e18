#pragma once

#include <cstddef>
#include <functional>

namespace rmlab {

// Worker count used when a caller passes workers <= 0:
// LAB_WORKERS environment variable if set, otherwise hardware concurrency.
int default_workers();

// Runs fn(i) for i in [0, count). Each index must touch only its own output
// slot; reductions happen in index order on the caller side, so results are
// independent of the worker count and of scheduling. Exceptions from workers
// are rethrown on the calling thread (first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int workers = 0);

}  // namespace rmlab
