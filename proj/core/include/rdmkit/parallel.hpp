#pragma once

#include <cstddef>
#include <functional>

namespace rdmkit {

/// Worker count for sampling sweeps: min(hardware_concurrency, RDMKIT_THREADS).
int worker_count();

/// Runs body(i) for i in [0, n), splitting the range over worker_count()
/// threads. Falls back to a plain loop when only one worker is available.
/// The body must be safe to run concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rdmkit
