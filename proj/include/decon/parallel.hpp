#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace decon {

/// Splits [0, count) into at most `workers` contiguous chunks and runs
/// fn(begin, end, chunk_index) on each, in its own thread. Each chunk writes
/// only to its own slots / accumulator, so results do not depend on the
/// worker count; any cross-chunk combination must be done by the caller in
/// chunk order.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

unsigned default_workers();

}  // namespace decon
