#pragma once

#include <cstddef>
#include <functional>

namespace isodiff {

// Static chunked fan-out over [0, n). Each index is processed exactly once;
// callers write results into preallocated slots, so the assembled output is
// independent of the worker count.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace isodiff
