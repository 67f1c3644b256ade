#pragma once

#include <cstddef>
#include <functional>

namespace kcontact {

// Worker count: KCONTACT_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n) over contiguous chunks. Each index is handled by
// exactly one worker, so results written per index are schedule-independent.
// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kcontact
