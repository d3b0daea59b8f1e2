#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lcol/graph.hpp"
#include "lcol/rng.hpp"

namespace lcol {

inline Graph path_graph(NodeId n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return build_graph(n, std::move(e));
}

inline Graph cycle_graph(NodeId n) {
  if (n < 3) throw Error(ErrorKind::BadParams, "cycle needs at least 3 nodes");
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return build_graph(n, std::move(e));
}

inline Graph complete_graph(NodeId n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return build_graph(n, std::move(e));
}

inline Graph edgeless_graph(NodeId n) { return build_graph(n, {}); }

// W x H lattice; node (x, y) has id y * W + x.
inline Graph grid_graph(int W, int H) {
  if (W < 1 || H < 1) throw Error(ErrorKind::BadParams, "grid dimensions must be positive");
  std::vector<Edge> e;
  std::vector<std::string> labels;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      NodeId v = y * W + x;
      if (x + 1 < W) e.emplace_back(v, v + 1);
      if (y + 1 < H) e.emplace_back(v, v + W);
      labels.push_back("(" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
  return build_graph(W * H, std::move(e), std::move(labels));
}

inline Graph petersen_graph() {
  std::vector<Edge> e;
  for (NodeId i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  return build_graph(10, std::move(e));
}

// Connected bipartite graph: halves of size ceil(n/2) and floor(n/2), each
// cross pair present with probability p, then components are stitched
// together by cross edges into the component of node 0.
inline Graph random_bipartite(NodeId n, double p, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::BadParams, "random_bipartite needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::BadParams, "p must lie in [0,1]");
  Rng rng(derive_seed(seed, {0x6269}));
  const NodeId left = (n + 1) / 2;
  std::vector<Edge> e;
  if (p > 0.0) {
    // Geometric skipping over the left x right pair list.
    const std::uint64_t total = static_cast<std::uint64_t>(left) * static_cast<std::uint64_t>(n - left);
    const double logq = std::log1p(-std::min(p, 1.0 - 1e-12));
    std::uint64_t idx = 0;
    while (true) {
      if (p < 1.0) {
        double skip = std::floor(std::log1p(-rng.uniform01()) / logq);
        if (skip >= static_cast<double>(total - idx)) break;
        idx += static_cast<std::uint64_t>(skip);
      }
      if (idx >= total) break;
      NodeId a = static_cast<NodeId>(idx / (n - left));
      NodeId b = left + static_cast<NodeId>(idx % (n - left));
      e.emplace_back(a, b);
      ++idx;
    }
  }
  Graph g = build_graph(n, e);
  Components c = connected_components(g);
  if (c.count > 1) {
    // One representative per side for each component. Node 0 sits on the
    // left side, so component 0 always has a left representative.
    std::vector<NodeId> rep_left(c.count, -1), rep_right(c.count, -1);
    for (NodeId v = 0; v < n; ++v) {
      auto& rep = v < left ? rep_left : rep_right;
      if (rep[c.component[v]] == -1) rep[c.component[v]] = v;
    }
    const NodeId any_left = rep_left[0];
    NodeId any_right = rep_right[0];
    for (int k = 1; k < c.count; ++k) {
      if (rep_right[k] != -1) {
        e.emplace_back(any_left, rep_right[k]);
        continue;
      }
      // An isolated left node: hang it on a right node joined to the union.
      NodeId hub = any_right != -1 ? any_right : left;
      e.emplace_back(rep_left[k], hub);
      if (any_right == -1) {
        e.emplace_back(any_left, hub);
        any_right = hub;
      }
    }
    g = build_graph(n, std::move(e));
  }
  return g;
}

}  // namespace lcol
