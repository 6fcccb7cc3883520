#pragma once

#include <cstddef>
#include <functional>

namespace twistbeam {

/// Number of worker threads. Capped by the TWISTBEAM_THREADS environment
/// variable; defaults to the hardware concurrency.
int thread_budget();

/// Run fn over [0, n) split into contiguous chunks, one chunk per worker.
/// Falls back to a plain loop when the budget is 1 or n is small. Writers
/// own disjoint index ranges, so results are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace twistbeam
