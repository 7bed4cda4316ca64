#pragma once

#include <cstddef>
#include <functional>

namespace mapalign::detail {

// Worker count: MAPALIGN_THREADS when set (0 = auto), else hardware size.
std::size_t thread_budget();

// Runs fn(i) for i in [0, n). Items must be independent; each writes only
// its own output slot, so results are identical to the serial loop
// regardless of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mapalign::detail
