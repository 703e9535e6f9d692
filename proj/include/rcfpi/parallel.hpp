#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rcfpi {

/// Worker count: hardware concurrency capped by the IDV_THREADS env var.
int worker_count();

/// Runs f(i) for i in [0, n) on a worker pool. Each i owns its output slot,
/// so results are identical for any thread count. The first exception thrown
/// by a task is rethrown after the join.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& f);

}  // namespace rcfpi
