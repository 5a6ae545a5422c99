#include "osc/color_sorting.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace osc {

namespace {

std::vector<std::vector<char>> adjacency_table(const Graph& g) {
  std::vector<std::vector<char>> adj(g.n, std::vector<char>(g.n, 0));
  for (auto [u, v] : g.edges) {
    adj[u][v] = 1;
    adj[v][u] = 1;
  }
  return adj;
}

void require_permutation(int n, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("ordering must cover every node once");
  std::vector<char> seen(n, 0);
  for (int v : order) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument("ordering is not a permutation of 0..n-1");
    seen[v] = 1;
  }
}

int greedy_blocks(const std::vector<std::vector<char>>& adj,
                  const std::vector<int>& order,
                  std::vector<int>* starts_out) {
  // Greedy is optimal for a fixed order: any feasible partition must cut
  // at or before the first conflict, so cutting exactly there never costs
  // a block.
  std::vector<int> block;
  int blocks = 0;
  if (starts_out) starts_out->clear();
  for (size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    bool conflict = false;
    for (int u : block)
      if (adj[u][v]) {
        conflict = true;
        break;
      }
    if (i == 0 || conflict) {
      ++blocks;
      block.clear();
      if (starts_out) starts_out->push_back(static_cast<int>(i));
    }
    block.push_back(v);
  }
  return blocks;
}

}  // namespace

BlockCover block_cover_linear(const Graph& g, const std::vector<int>& order) {
  require_permutation(g.n, order);
  auto adj = adjacency_table(g);
  BlockCover bc;
  bc.ordering = order;
  greedy_blocks(adj, order, &bc.block_starts);
  return bc;
}

BlockCover block_cover_cyclic(const Graph& g, const CyclicOrder& co) {
  require_permutation(g.n, co.order);
  auto adj = adjacency_table(g);
  int best_blocks = g.n + 1;
  int best_rot = 0;
  std::vector<int> rotated(g.n);
  for (int r = 0; r < g.n; ++r) {
    for (int i = 0; i < g.n; ++i) rotated[i] = co.order[(r + i) % g.n];
    int blocks = greedy_blocks(adj, rotated, nullptr);
    if (blocks < best_blocks) {
      best_blocks = blocks;
      best_rot = r;
    }
  }
  BlockCover bc;
  bc.ordering.resize(g.n);
  for (int i = 0; i < g.n; ++i)
    bc.ordering[i] = co.order[(best_rot + i) % g.n];
  greedy_blocks(adj, bc.ordering, &bc.block_starts);
  return bc;
}

Coloring cover_to_coloring(const BlockCover& bc) {
  const int n = static_cast<int>(bc.ordering.size());
  Coloring c;
  c.assignment.assign(n, -1);
  c.num_colors = bc.num_blocks();
  c.order_certificate = bc.ordering;
  for (int b = 0; b < bc.num_blocks(); ++b) {
    int end = (b + 1 < bc.num_blocks()) ? bc.block_starts[b + 1] : n;
    for (int i = bc.block_starts[b]; i < end; ++i)
      c.assignment[bc.ordering[i]] = b;
  }
  return c;
}

std::pair<std::vector<int>, int> min_color_sorting_bruteforce(const Graph& g) {
  if (g.n > 8)
    throw std::invalid_argument(
        "min_color_sorting_bruteforce is limited to n <= 8");
  auto adj = adjacency_table(g);
  std::vector<int> perm(g.n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  int best_blocks = greedy_blocks(adj, perm, nullptr);
  while (std::next_permutation(perm.begin(), perm.end())) {
    int blocks = greedy_blocks(adj, perm, nullptr);
    if (blocks < best_blocks) {
      best_blocks = blocks;
      best = perm;
    }
  }
  int chi = chromatic_number_bruteforce(g);
  if (best_blocks != chi)
    throw std::logic_error(
        "minimum block count disagrees with the chromatic number");
  return {best, best_blocks};
}

}  // namespace osc
