#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace osc {

// Undirected simple graph on nodes 0..n-1. Edges are normalized to
// (min,max) pairs, sorted lexicographically, duplicates removed.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  // Proper partition known by construction (generated instances).
  // Empty when absent.
  std::vector<std::vector<int>> planted_classes;

  bool has_planted_classes() const { return !planted_classes.empty(); }
  bool has_edge(int u, int v) const;
  Eigen::MatrixXd adjacency() const;
  Eigen::VectorXd degrees() const;
  std::vector<std::vector<int>> neighbor_lists() const;
};

// Normalizes and validates raw edge input. Throws std::invalid_argument on
// out-of-range indices, self-loops, or a planted partition that is not a
// proper disjoint cover.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges,
                 std::vector<std::vector<int>> planted_classes = {});

struct Coloring {
  std::vector<int> assignment;  // node -> color in [0, num_colors)
  int num_colors = 0;
  // Node ordering the coloring was read off from, when one exists.
  std::vector<int> order_certificate;
};

// Complete multipartite graph; class i occupies a contiguous index range.
// Requires at least two classes, every class size >= 1.
Graph complete_partite(const std::vector<int>& class_sizes);

// Removes each edge independently with probability 1 - keep_fraction.
// Deterministic for a fixed seed. Planted classes stay proper and are
// carried over. Requires a planted partition and keep_fraction in (0, 1].
Graph sparsify(const Graph& g, double keep_fraction, std::uint64_t seed);

// Exact chromatic number by backtracking, guarded to n <= 12.
int chromatic_number_bruteforce(const Graph& g);

// True iff no edge is monochromatic. Throws if the assignment does not
// cover every node with a color in [0, num_colors).
bool validate_coloring(const Graph& g, const Coloring& c);

}  // namespace osc
