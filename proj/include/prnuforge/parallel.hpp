#pragma once

#include <cstddef>
#include <functional>

namespace prnuforge {

// Worker count: hardware concurrency, capped by the PRNU_FORGE_THREADS
// environment variable when set. Always at least 1.
std::size_t worker_count();

// Run fn(0..n-1) across the worker pool. Workers pull indices from a shared
// counter; callers keep determinism by writing results into per-index slots.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace prnuforge
