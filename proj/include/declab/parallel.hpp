#pragma once

#include <cstdint>
#include <functional>

namespace declab {

// Worker count from DECLAB_THREADS (default 1, clamped to [1, 256]).
int thread_count();

// Runs body(k) for k in [0, n). Task k always goes to the same worker for a given thread count, and callers
// reduce per-task results in task order, so output does not depend on the thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace declab
