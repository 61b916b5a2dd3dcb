#pragma once

#include <cstddef>
#include <functional>

namespace spca {

// Worker-pool width: SPCA_THREADS env var if set, otherwise the hardware
// concurrency. Always >= 1.
int worker_count();

// Splits [0, n) into contiguous chunks and runs body(begin, end) on each,
// one chunk per worker. Runs serially when the estimated total work
// (n * work_per_item) is too small to amortize thread launch.
//
// Each index is handled by exactly one worker, so any per-index accumulation
// order is preserved regardless of the worker count.
void parallel_for(int n, const std::function<void(int, int)>& body,
                  std::size_t work_per_item = 1);

}  // namespace spca
