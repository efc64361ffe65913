#pragma once

#include <functional>

namespace pcontest {

/// Worker count: `requested` if positive, else the PCONTEST_THREADS
/// environment variable, else hardware concurrency (at least 1).
int thread_budget(int requested = 0);

/// Splits [0, n) into `chunks` contiguous ranges and runs fn(chunk, begin,
/// end) on up to `threads` workers. Chunk boundaries depend only on (n,
/// chunks), so callers that merge per-chunk results in chunk order get
/// schedule-independent output.
void parallel_chunks(long n, int chunks, int threads,
                     const std::function<void(int, long, long)>& fn);

}  // namespace pcontest
