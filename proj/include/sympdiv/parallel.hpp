#pragma once

#include <cstddef>
#include <functional>

namespace sympdiv {

// Worker count from SYMPDIV_THREADS (default 1; 0 means hardware concurrency).
std::size_t thread_count();

// Calls fn(i) for i in [0, count), split into contiguous chunks across
// thread_count() threads. fn must only write to per-index state; the first
// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace sympdiv
