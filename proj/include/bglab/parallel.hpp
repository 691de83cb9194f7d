#pragma once

#include <cstddef>
#include <functional>

namespace bglab {

/// Thread count used when the caller passes 0: $BGLAB_THREADS if set and
/// positive, otherwise std::thread::hardware_concurrency().
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on `threads` workers. Work is handed out
/// by index, so callers that write results into slot i get output that does
/// not depend on the thread count. The first exception thrown by a body is
/// rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace bglab
