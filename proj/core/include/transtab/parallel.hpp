#pragma once

#include <cstddef>
#include <functional>

namespace transtab {

// Worker count: TRANSTAB_THREADS when set to a positive integer, otherwise
// the hardware concurrency (at least 1).
std::size_t default_workers();

// Runs body(i) for every i in [0, n) on up to `workers` threads. Work is
// handed out in index order; callers write results to index-addressed slots
// so the outcome does not depend on the worker count. The exception from the
// lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace transtab
