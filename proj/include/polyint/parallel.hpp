#pragma once

#include <cstddef>
#include <functional>

namespace polyint {

/// Worker count used when a caller passes threads <= 0: hardware concurrency.
int default_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Callers write
/// results into slot i, so the merged output never depends on scheduling.
/// The exception from the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace polyint
