#pragma once

// Deliberately naive reference implementations the library is checked against.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lcol/graph.hpp"
#include "lcol/rng.hpp"

namespace lcol::oracle {

inline constexpr int kInf = 1 << 28;

// Floyd-Warshall over the adjacency matrix.
inline std::vector<std::vector<int>> all_pairs(const Graph& g) {
  const NodeId n = g.node_count();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (NodeId v = 0; v < n; ++v) d[v][v] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (NodeId k = 0; k < n; ++k)
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Tries every assignment of k colours.
inline bool k_colorable(const Graph& g, int k) {
  const NodeId n = g.node_count();
  std::vector<int> col(n, 0);
  for (;;) {
    bool ok = true;
    for (auto [u, v] : g.edges())
      if (col[u] == col[v]) {
        ok = false;
        break;
      }
    if (ok) return true;
    NodeId i = 0;
    while (i < n && ++col[i] == k) col[i++] = 0;
    if (i == n) return false;
  }
}

inline int chromatic_number(const Graph& g) {
  if (g.node_count() == 0) return 0;
  for (int k = 1;; ++k)
    if (k_colorable(g, k)) return k;
}

inline bool proper(const Graph& g, const std::vector<int>& col) {
  for (NodeId u = 0; u < g.node_count(); ++u)
    for (NodeId v = u + 1; v < g.node_count(); ++v)
      if (g.has_edge(u, v) && col[u] == col[v]) return false;
  return true;
}

inline Graph random_graph(NodeId n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) e.emplace_back(u, v);
  return build_graph(n, std::move(e));
}

// Random connected graph: random spanning tree plus extra edges.
inline Graph random_connected(NodeId n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (NodeId v = 1; v < n; ++v) e.emplace_back(static_cast<NodeId>(rng.below(v)), v);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) e.emplace_back(u, v);
  return build_graph(n, std::move(e));
}

inline Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  std::vector<Edge> e;
  for (auto [u, v] : g.edges()) e.emplace_back(perm[u], perm[v]);
  return build_graph(g.node_count(), std::move(e));
}

inline std::vector<NodeId> random_permutation(NodeId n, Rng& rng) {
  std::vector<NodeId> p(n);
  for (NodeId i = 0; i < n; ++i) p[i] = i;
  for (NodeId i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

}  // namespace lcol::oracle
