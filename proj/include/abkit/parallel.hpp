#pragma once

#include <functional>

namespace abkit {

// Worker count from ABKIT_THREADS (default: hardware concurrency, at least 1).
int thread_count();
void set_thread_count(int n);

// Runs fn(0..n-1) on up to thread_count() workers. Callers write results into
// per-index slots, so output never depends on scheduling. The first exception
// thrown by any task is rethrown.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace abkit
