#pragma once

#include <cstddef>
#include <functional>

namespace distbeam {

/// Worker count used by parallel sweeps: DISTBEAM_THREADS if set (clamped to
/// [1,64]), otherwise the hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0,n). Items must be independent; results may not
/// depend on the schedule. The first exception thrown by any item is
/// rethrown after all workers have joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace distbeam
