#pragma once

#include <cstddef>
#include <functional>

namespace failsim
{

/// Worker count: `requested` if nonzero, else FAILSIM_THREADS, else hardware concurrency.
std::size_t resolve_thread_count(std::size_t requested = 0);

/**
 * Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
 * claimed dynamically, so callers needing deterministic results must make
 * body(i) depend only on i and reduce afterwards in index order. The first
 * exception thrown by any body is rethrown on the calling thread.
 */
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

} // namespace failsim
