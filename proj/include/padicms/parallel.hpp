#pragma once

#include <cstdint>
#include <functional>

namespace padicms {

/**
 * Resolve the worker count for parallel scans.
 *
 * Precedence: an explicit positive request wins, then the environment
 * variable PADIC_MODELSET_THREADS, then min(hardware concurrency, 8).
 */
int resolve_thread_count(int requested = 0);

/**
 * Run body(i) for i in [begin, end) split into contiguous chunks across
 * the given number of worker threads. With threads <= 1 the loop runs on
 * the calling thread, so results are bit-identical either way as long as
 * the body only writes to its own index range.
 */
void parallel_for(std::int64_t begin, std::int64_t end, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& chunk_body);

} // namespace padicms
