#pragma once

#include <cstddef>
#include <functional>

namespace dirmix {

/// Worker count from DIRMIX_THREADS (default 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index must write only its own output
/// slot; results are then independent of the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace dirmix
