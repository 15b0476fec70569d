#pragma once

#include <functional>

namespace blochlab {

// Worker cap: BLOCHLAB_THREADS when set (>= 1), otherwise hardware
// concurrency.
int max_threads();

// Runs fn(chunk) for chunk = 0..n_chunks-1 on up to max_threads() workers.
// Callers store per-chunk results in preallocated slots and fold them in
// chunk order, so the outcome does not depend on the worker count.
void for_each_chunk(int n_chunks, const std::function<void(int)>& fn);

}  // namespace blochlab
