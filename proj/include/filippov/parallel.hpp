#pragma once

#include <cstddef>
#include <functional>

namespace filippov {

/// Worker count: FILIPPOV_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace filippov
