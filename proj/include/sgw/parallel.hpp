#pragma once

#include <cstddef>
#include <functional>

namespace sgw {

/// Worker count: SGW_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for every i in [0, n), spreading contiguous chunks over
/// worker threads. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sgw
