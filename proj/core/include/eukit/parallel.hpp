#pragma once

#include <cstdint>
#include <functional>

namespace eukit {

// Runs fn(i) for i in [0, n). With threads > 1 the index range is split into
// contiguous chunks, one thread each; fn must write only to slots indexed by
// i, so results are identical to the serial order regardless of thread
// count. The first exception thrown by any worker is rethrown.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn);

// Thread-count resolution: explicit value if > 0, else EU_KIT_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace eukit
