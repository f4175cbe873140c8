#pragma once

#include <cstddef>
#include <functional>

namespace rhd {

// Worker count honoring the RHD_THREADS environment cap.
int worker_count();

// Deterministic parallel map: fn(i) for i in [0, n), partitioned into
// contiguous blocks. Results must be written to disjoint slots; reductions
// stay with the caller so summation order is fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace rhd
