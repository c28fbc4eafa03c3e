#pragma once

#include <cstddef>
#include <functional>

namespace idlab {

/// Runs body(i) for i in [0, n) on up to `threads` workers pulling indices
/// from a shared counter. Results must be written to per-index slots so that
/// aggregation order does not depend on scheduling. The first exception is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Thread count from IDLAB_THREADS, else 1.
int default_threads();

} // namespace idlab
