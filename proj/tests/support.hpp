#pragma once

// Shared fixtures for the test suites: small named graphs, seeded random
// graphs, and a few checking helpers.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "osc/dynamics.hpp"
#include "osc/graph.hpp"

namespace support {

inline osc::Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return osc::make_graph(n, std::move(edges));
}

inline osc::Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return osc::make_graph(n, std::move(edges));
}

inline osc::Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return osc::make_graph(n, std::move(edges));
}

// Hub node 0 joined to a cycle on 1..n-1.
inline osc::Graph wheel_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    edges.emplace_back(0, i);
    edges.emplace_back(i, i == n - 1 ? 1 : i + 1);
  }
  return osc::make_graph(n, std::move(edges));
}

// Two triangles joined by a perfect matching.
inline osc::Graph prism_graph() {
  return osc::make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5},
                             {0, 3}, {1, 4}, {2, 5}});
}

inline osc::Graph petersen_graph() {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);        // outer cycle
    edges.emplace_back(i, i + 5);              // spokes
    edges.emplace_back(i + 5, (i + 2) % 5 + 5);  // inner pentagram
  }
  return osc::make_graph(10, std::move(edges));
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline osc::Graph random_graph(int n, double edge_prob, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform01(rng) < edge_prob) edges.emplace_back(i, j);
  return osc::make_graph(n, std::move(edges));
}

inline std::vector<int> random_permutation(int n, std::uint64_t seed) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

// Fewest contiguous blocks with no internal edge, by quadratic DP over
// prefix cuts. Independent of the greedy scan under test.
inline int min_contiguous_blocks(const osc::Graph& g,
                                 const std::vector<int>& order) {
  int n = static_cast<int>(order.size());
  std::vector<int> dp(n + 1, n + 1);
  dp[0] = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i - 1; j >= 0; --j) {
      bool independent = true;
      for (int a = j; a < i && independent; ++a)
        for (int b = a + 1; b < i; ++b)
          if (g.has_edge(order[a], order[b])) {
            independent = false;
            break;
          }
      if (independent) dp[i] = std::min(dp[i], dp[j] + 1);
    }
  return dp[n];
}

// Node sequence of charging onsets, in event-log (time) order.
inline std::vector<int> spike_sequence(const osc::Trajectory& traj,
                                       int limit = -1) {
  std::vector<int> seq;
  for (const auto& ev : traj.events)
    if (ev.kind == osc::Transition::ToCharging) {
      seq.push_back(ev.node);
      if (limit >= 0 && static_cast<int>(seq.size()) == limit) break;
    }
  return seq;
}

inline bool equal_up_to_rotation(const std::vector<int>& a,
                                 const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  std::vector<int> doubled(b);
  doubled.insert(doubled.end(), b.begin(), b.end());
  for (size_t off = 0; off < b.size(); ++off)
    if (std::equal(a.begin(), a.end(), doubled.begin() + off)) return true;
  return false;
}

// Sorted-set view of a partition, for order-insensitive comparison.
inline std::vector<std::vector<int>> canonical_partition(
    std::vector<std::vector<int>> parts) {
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end());
  return parts;
}

// Count of consecutive-sample pairs inside maximal all-discharging
// intervals where the Euclidean norm grew beyond relative slack. A pair
// is inside such an interval when both endpoints have every device off
// and no event lies in (t_a, t_b].
inline int discharge_norm_violations(const osc::Trajectory& traj,
                                     double slack = 1e-12) {
  auto all_off = [](const std::vector<std::uint8_t>& s) {
    return std::none_of(s.begin(), s.end(), [](auto b) { return b != 0; });
  };
  int violations = 0;
  size_t ev = 0;
  for (size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i];
    const auto& b = traj.samples[i + 1];
    while (ev < traj.events.size() && traj.events[ev].t <= a.t) ++ev;
    bool event_inside = ev < traj.events.size() && traj.events[ev].t <= b.t;
    if (event_inside || !all_off(a.s) || !all_off(b.s)) continue;
    if (b.x.norm() > a.x.norm() * (1.0 + slack)) ++violations;
  }
  return violations;
}

}  // namespace support
