#pragma once

#include <functional>

namespace fracwdw {

// Hardware concurrency, capped by FRACWDW_THREADS when set.
int worker_count(int tasks);

// Runs fn(i) for i in [0, n) on worker threads. Results must be written to
// per-index slots; the first exception (lowest index) is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace fracwdw
