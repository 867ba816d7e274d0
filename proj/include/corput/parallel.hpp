#pragma once

#include <cstddef>
#include <functional>

namespace corput {

/// Worker count from CORPUT_THREADS (0 or unset = hardware concurrency).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index writes only its own slot, so the
/// caller's result is independent of scheduling. The exception thrown by the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace corput
