#pragma once

#include <utility>
#include <vector>

#include "osc/graph.hpp"
#include "osc/phase.hpp"

namespace osc {

// Partition of a node ordering into contiguous independent blocks.
// block_starts[0] == 0; block b covers ordering positions
// [block_starts[b], block_starts[b+1]).
struct BlockCover {
  std::vector<int> ordering;
  std::vector<int> block_starts;
  int num_blocks() const { return static_cast<int>(block_starts.size()); }
};

// Greedy left-to-right scan: start a new block exactly when the next node
// is adjacent to the current one. Minimal over contiguous partitions of
// this ordering. `order` must be a permutation of 0..n-1.
BlockCover block_cover_linear(const Graph& g, const std::vector<int>& order);

// Minimum over all n rotations of the cyclic order; ties pick the
// smallest rotation offset.
BlockCover block_cover_cyclic(const Graph& g, const CyclicOrder& co);

// Block index becomes the color; the ordering is kept as certificate.
Coloring cover_to_coloring(const BlockCover& bc);

// Exhaustive minimum of block counts over every permutation (n <= 8).
// Returns a best permutation and its block count, which always equals
// the chromatic number.
std::pair<std::vector<int>, int> min_color_sorting_bruteforce(const Graph& g);

}  // namespace osc
