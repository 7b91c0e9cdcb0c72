#pragma once

#include <cstddef>
#include <functional>

namespace rtorsion {

/// Worker count from TORSION_THREADS, else the hardware concurrency.
unsigned thread_count();

/// Runs f(0..n-1) on up to thread_count() threads; the first exception
/// thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace rtorsion
