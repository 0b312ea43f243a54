#pragma once

#include <cstddef>
#include <functional>

namespace spl {

/// Upper bound on worker threads used inside library calls.
///
/// Defaults to the SPL_THREADS environment variable when it holds a positive
/// integer, otherwise to std::thread::hardware_concurrency().
int max_threads();

/// Overrides the thread cap for the rest of the process; n <= 0 restores
/// the environment/hardware default.
void set_max_threads(int n);

/// Splits [0, n) into contiguous chunks and runs `body(begin, end)` on each,
/// possibly concurrently. Work below `min_items_per_thread` per worker runs
/// inline. `body` must only write to locations owned by its own index range;
/// under that rule results are identical for any thread count.
void parallel_for(std::size_t n, std::size_t min_items_per_thread,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace spl
