#pragma once

#include <functional>

namespace susyg {

// Worker count: SUSYG_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n) over contiguous chunks. Every index is
// computed independently, so results do not depend on the thread count.
// The first exception thrown by any worker is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace susyg
