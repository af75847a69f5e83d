#pragma once

#include <cstddef>
#include <functional>

namespace looptree {

/// Worker count: the override if set, else LOOPTREE_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
unsigned thread_count();

/// Overrides thread_count() for this process; 0 restores the default.
void set_thread_override(unsigned threads);

/// Runs task(i) for i in [0, count) on up to `threads` workers (0 = thread_count()).
/// Tasks must write only to their own slot; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task, unsigned threads = 0);

}  // namespace looptree
