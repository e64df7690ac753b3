#pragma once

#include <cstddef>
#include <functional>

namespace fraclift {

// Worker count from LIFT_THREADS (0 or unset = hardware concurrency).
unsigned thread_count();

// Runs body(i) for i in [begin, end) split into contiguous static chunks.
// Each index is visited exactly once, so results written per index are
// identical to a serial run.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

} // namespace fraclift
