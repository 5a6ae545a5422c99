#include "osc/graph.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace osc {

bool Graph::has_edge(int u, int v) const {
  if (u == v) return false;
  auto e = std::minmax(u, v);
  return std::binary_search(edges.begin(), edges.end(),
                            std::make_pair(e.first, e.second));
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (auto [u, v] : edges) {
    A(u, v) = 1.0;
    A(v, u) = 1.0;
  }
  return A;
}

Eigen::VectorXd Graph::degrees() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (auto [u, v] : edges) {
    d[u] += 1.0;
    d[v] += 1.0;
  }
  return d;
}

std::vector<std::vector<int>> Graph::neighbor_lists() const {
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

Graph make_graph(int n, std::vector<std::pair<int, int>> edges,
                 std::vector<std::vector<int>> planted_classes) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("edge index out of range: (" +
                                  std::to_string(u) + "," + std::to_string(v) +
                                  ")");
    if (u == v)
      throw std::invalid_argument("self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.n = n;
  g.edges = std::move(edges);

  if (!planted_classes.empty()) {
    std::vector<int> seen(n, 0);
    for (auto& cls : planted_classes) {
      if (cls.empty()) throw std::invalid_argument("empty planted class");
      for (int v : cls) {
        if (v < 0 || v >= n)
          throw std::invalid_argument("planted class index out of range");
        if (seen[v]++)
          throw std::invalid_argument("planted classes are not disjoint");
      }
    }
    for (int v = 0; v < n; ++v)
      if (!seen[v])
        throw std::invalid_argument("planted classes do not cover node " +
                                    std::to_string(v));
    for (auto& cls : planted_classes)
      for (size_t i = 0; i < cls.size(); ++i)
        for (size_t j = i + 1; j < cls.size(); ++j)
          if (g.has_edge(cls[i], cls[j]))
            throw std::invalid_argument("planted class contains an edge");
    g.planted_classes = std::move(planted_classes);
  }
  return g;
}

Graph complete_partite(const std::vector<int>& class_sizes) {
  if (class_sizes.size() < 2)
    throw std::invalid_argument("complete_partite needs at least two classes");
  int n = 0;
  for (int m : class_sizes) {
    if (m < 1) throw std::invalid_argument("class sizes must be positive");
    n += m;
  }
  std::vector<std::vector<int>> classes;
  int base = 0;
  for (int m : class_sizes) {
    std::vector<int> cls(m);
    for (int i = 0; i < m; ++i) cls[i] = base + i;
    classes.push_back(std::move(cls));
    base += m;
  }
  std::vector<std::pair<int, int>> edges;
  for (size_t a = 0; a < classes.size(); ++a)
    for (size_t b = a + 1; b < classes.size(); ++b)
      for (int u : classes[a])
        for (int v : classes[b]) edges.emplace_back(u, v);
  return make_graph(n, std::move(edges), std::move(classes));
}

namespace {

// Uniform double in [0,1) from the top 53 bits; keeps the stream
// identical across standard library implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Graph sparsify(const Graph& g, double keep_fraction, std::uint64_t seed) {
  if (!g.has_planted_classes())
    throw std::invalid_argument("sparsify requires a planted partition");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
    throw std::invalid_argument("keep_fraction must be in (0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> kept;
  kept.reserve(g.edges.size());
  for (auto e : g.edges)
    if (uniform01(rng) < keep_fraction) kept.push_back(e);
  return make_graph(g.n, std::move(kept), g.planted_classes);
}

namespace {

bool color_feasible(const std::vector<std::vector<int>>& adj, int n, int k,
                    std::vector<int>& color, int v) {
  if (v == n) return true;
  int used = 0;
  for (int u = 0; u < v; ++u) used = std::max(used, color[u] + 1);
  // Only the first unused color needs trying; the rest are symmetric.
  int limit = std::min(k, used + 1);
  for (int c = 0; c < limit; ++c) {
    bool ok = true;
    for (int u : adj[v])
      if (u < v && color[u] == c) {
        ok = false;
        break;
      }
    if (!ok) continue;
    color[v] = c;
    if (color_feasible(adj, n, k, color, v + 1)) return true;
  }
  color[v] = -1;
  return false;
}

}  // namespace

int chromatic_number_bruteforce(const Graph& g) {
  if (g.n > 12)
    throw std::invalid_argument("chromatic_number_bruteforce is limited to n <= 12");
  if (g.edges.empty()) return 1;
  auto adj = g.neighbor_lists();
  for (int k = 2; k <= g.n; ++k) {
    std::vector<int> color(g.n, -1);
    color[0] = 0;
    if (color_feasible(adj, g.n, k, color, 1)) return k;
  }
  return g.n;
}

bool validate_coloring(const Graph& g, const Coloring& c) {
  if (static_cast<int>(c.assignment.size()) != g.n)
    throw std::invalid_argument("coloring does not cover every node");
  for (int v = 0; v < g.n; ++v)
    if (c.assignment[v] < 0 || c.assignment[v] >= c.num_colors)
      throw std::invalid_argument("color of node " + std::to_string(v) +
                                  " is outside [0, num_colors)");
  for (auto [u, v] : g.edges)
    if (c.assignment[u] == c.assignment[v]) return false;
  return true;
}

}  // namespace osc
