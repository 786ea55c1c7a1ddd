#pragma once

#include <cstddef>
#include <functional>

namespace fastgraph {

/// Worker threads used by the data-parallel loops. 0 means all hardware
/// threads. Results never depend on this value.
void set_num_threads(int n);
int num_threads();

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on each.
/// Chunk boundaries depend on the thread count, so bodies must only write to
/// state owned by their range.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 256);

}  // namespace fastgraph
