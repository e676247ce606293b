#pragma once

#include <cstddef>
#include <functional>

namespace glspace {

/// Worker count: GLSPACE_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Callers write
/// results into slot i, so the outcome does not depend on scheduling. If any
/// call throws, the exception of the smallest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace glspace
