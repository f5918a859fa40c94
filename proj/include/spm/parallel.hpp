#pragma once

#include <cstddef>
#include <functional>

namespace spm {

/// Hardware concurrency, capped by the SP_THREADS environment variable
/// when it holds a positive integer.
std::size_t worker_count();

/// Runs fn(0..n-1) on up to worker_count() threads. The first exception
/// thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace spm
