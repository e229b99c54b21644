#pragma once

#include <cstddef>
#include <functional>

namespace kdq {

// Number of worker threads to use when the caller passes 0 (hardware
// concurrency, capped at 16).
int default_threads();

// Runs fn(i) for i in [0, n). Tasks must write to disjoint slots; the call
// rethrows the first worker exception after all workers join. threads == 1
// runs inline.
void parallel_for(size_t n, const std::function<void(size_t)>& fn, int threads = 0);

} // namespace kdq
