#pragma once

#include <cstddef>
#include <functional>

namespace tomo {

/// Worker count for internal parallel loops: hardware concurrency, capped by
/// the TOMO_THREADS environment variable when it holds a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, n).  Each index is visited exactly once; bodies
/// must only write to storage owned by their index.  The first exception
/// thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tomo
