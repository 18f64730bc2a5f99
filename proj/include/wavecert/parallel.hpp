#pragma once

#include <cstddef>
#include <functional>

namespace wavecert {

/// Number of worker threads used by grid sweeps. 0 selects all cores.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Each index is visited exactly once;
/// callers write results into per-index slots and reduce sequentially so
/// results never depend on the thread count. The first exception thrown by
/// any worker (lowest index wins) is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace wavecert
