#pragma once

#include <functional>

namespace odl {

/// Worker budget: ODL_THREADS if set (clamped to >= 1), otherwise the
/// hardware concurrency.
long thread_budget();

/// Run fn(0), ..., fn(n-1), splitting the range across the thread budget.
/// Iterations must write to disjoint state. Falls back to a plain loop when
/// the budget or n is 1. The first exception (by lowest index) is rethrown
/// after all workers join, so results are deterministic either way.
void parallel_for(long n, const std::function<void(long)>& fn);

} // namespace odl
