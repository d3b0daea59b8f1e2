#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lcol/error.hpp"

namespace lcol {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

// Sorted list of distinct node ids.
class NodeSet {
 public:
  NodeSet() = default;

  static NodeSet from_sorted(std::vector<NodeId> ids) {
    NodeSet s;
    s.ids_ = std::move(ids);
    return s;
  }

  static NodeSet from_unsorted(std::vector<NodeId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return from_sorted(std::move(ids));
  }

  static NodeSet range(NodeId n) {
    std::vector<NodeId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), 0);
    return from_sorted(std::move(ids));
  }

  bool contains(NodeId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  NodeId operator[](std::size_t i) const { return ids_[i]; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<NodeId>& ids() const { return ids_; }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<NodeId> ids_;
};

inline NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet::from_sorted(std::move(out));
}

inline NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  std::vector<NodeId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return NodeSet::from_sorted(std::move(out));
}

inline bool is_subset(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Immutable simple undirected graph in CSR form.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  NodeId node_count() const { return static_cast<NodeId>(offsets_.size() - 1); }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  NodeId degree(NodeId v) const { return static_cast<NodeId>(offsets_[v + 1] - offsets_[v]); }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  // Edges with u < v in lexicographic order.
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(NodeId v) const { return labels_.empty() ? std::to_string(v) : labels_[v]; }

  friend Graph build_graph(NodeId, std::vector<Edge>, std::vector<std::string>);

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count() == b.node_count() && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
};

inline Graph build_graph(NodeId n, std::vector<Edge> edges, std::vector<std::string> labels = {}) {
  if (n < 0) throw Error(ErrorKind::OutOfRange, "negative node count");
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::OutOfRange, "label count does not match node count");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(ErrorKind::OutOfRange,
                  "edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside 0.." +
                      std::to_string(n - 1));
    if (u == v) throw Error(ErrorKind::SelfLoop, "self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Graph g;
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (auto [u, v] : edges) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (NodeId i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(2 * edges.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    g.adjacency_[fill[u]++] = v;
    g.adjacency_[fill[v]++] = u;
  }
  for (NodeId v = 0; v < n; ++v)
    std::sort(g.adjacency_.begin() + g.offsets_[v], g.adjacency_.begin() + g.offsets_[v + 1]);
  g.edges_ = std::move(edges);
  g.labels_ = std::move(labels);
  return g;
}

inline Graph with_labels(const Graph& g, std::vector<std::string> labels) {
  return build_graph(g.node_count(), g.edges(), std::move(labels));
}

// ---------------------------------------------------------------------------
// Breadth-first search

inline constexpr int kUnreached = -1;

// Reusable BFS scratch space; `alive` optionally restricts traversal.
class Bfs {
 public:
  explicit Bfs(const Graph& g, const std::vector<char>* alive = nullptr)
      : g_(g), alive_(alive), dist_(static_cast<std::size_t>(g.node_count()), kUnreached) {}

  // Runs from the given sources up to max_depth (negative = unbounded).
  // Returns the visit order; distances are available through dist().
  const std::vector<NodeId>& run(std::span<const NodeId> sources, int max_depth = -1) {
    for (NodeId v : order_) dist_[v] = kUnreached;
    order_.clear();
    for (NodeId s : sources) {
      if (dist_[s] != kUnreached || !is_alive(s)) continue;
      dist_[s] = 0;
      order_.push_back(s);
    }
    for (std::size_t head = 0; head < order_.size(); ++head) {
      NodeId u = order_[head];
      if (max_depth >= 0 && dist_[u] >= max_depth) continue;
      for (NodeId w : g_.neighbors(u)) {
        if (dist_[w] != kUnreached || !is_alive(w)) continue;
        dist_[w] = dist_[u] + 1;
        order_.push_back(w);
      }
    }
    return order_;
  }

  const std::vector<NodeId>& run_from(NodeId s, int max_depth = -1) {
    return run(std::span<const NodeId>(&s, 1), max_depth);
  }

  int dist(NodeId v) const { return dist_[v]; }
  const std::vector<NodeId>& visited() const { return order_; }

 private:
  bool is_alive(NodeId v) const { return alive_ == nullptr || (*alive_)[v]; }

  const Graph& g_;
  const std::vector<char>* alive_;
  std::vector<int> dist_;
  std::vector<NodeId> order_;
};

inline std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  Bfs bfs(g);
  bfs.run_from(source);
  std::vector<int> d(static_cast<std::size_t>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) d[v] = bfs.dist(v);
  return d;
}

inline NodeSet ball(const Graph& g, NodeId v, int T) {
  if (v < 0 || v >= g.node_count()) throw Error(ErrorKind::OutOfRange, "ball center out of range");
  Bfs bfs(g);
  return NodeSet::from_unsorted(bfs.run_from(v, T));
}

inline NodeSet neighborhood_of_set(const Graph& g, const NodeSet& S, int T) {
  for (NodeId v : S)
    if (v < 0 || v >= g.node_count()) throw Error(ErrorKind::OutOfRange, "seed out of range");
  Bfs bfs(g);
  return NodeSet::from_unsorted(bfs.run(S.ids(), T));
}

inline Graph power_graph(const Graph& g, int k) {
  if (k < 1) throw Error(ErrorKind::BadParams, "power_graph needs k >= 1");
  std::vector<Edge> edges;
  Bfs bfs(g);
  for (NodeId v = 0; v < g.node_count(); ++v)
    for (NodeId w : bfs.run_from(v, k))
      if (w > v) edges.emplace_back(v, w);
  return build_graph(g.node_count(), std::move(edges), g.labels());
}

// ---------------------------------------------------------------------------
// Structural constructions

struct InducedSubgraph {
  Graph graph;
  std::vector<NodeId> to_host;  // new id -> old id

  // old id -> new id, or -1 when the node is not part of the subgraph
  NodeId local_id(NodeId host_id) const {
    auto it = std::lower_bound(to_host.begin(), to_host.end(), host_id);
    if (it == to_host.end() || *it != host_id) return -1;
    return static_cast<NodeId>(it - to_host.begin());
  }
};

inline InducedSubgraph induced_subgraph(const Graph& g, const NodeSet& S) {
  std::vector<NodeId> local(static_cast<std::size_t>(g.node_count()), -1);
  for (std::size_t i = 0; i < S.size(); ++i) local[S[i]] = static_cast<NodeId>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < S.size(); ++i)
    for (NodeId w : g.neighbors(S[i]))
      if (local[w] > static_cast<NodeId>(i)) edges.emplace_back(static_cast<NodeId>(i), local[w]);
  std::vector<std::string> labels;
  if (g.has_labels())
    for (NodeId v : S) labels.push_back(g.labels()[v]);
  return {build_graph(static_cast<NodeId>(S.size()), std::move(edges), std::move(labels)), S.ids()};
}

inline Graph tensor_product(const Graph& g, const Graph& h) {
  const NodeId nh = h.node_count();
  const NodeId n = g.node_count() * nh;
  std::vector<Edge> edges;
  for (auto [a, a2] : g.edges())
    for (auto [b, b2] : h.edges()) {
      edges.emplace_back(a * nh + b, a2 * nh + b2);
      edges.emplace_back(a * nh + b2, a2 * nh + b);
    }
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (NodeId a = 0; a < g.node_count(); ++a)
    for (NodeId b = 0; b < nh; ++b) labels.push_back("(" + g.label(a) + "," + h.label(b) + ")");
  return build_graph(n, std::move(edges), std::move(labels));
}

// Node layout of g *_r h: the g side first, then layers 1..r (each row-major
// over V(g) x V(h)), then the h side.
struct RJoinLayout {
  NodeId ng, nh;
  int r;
  NodeId g_node(NodeId a) const { return a; }
  NodeId layer_node(NodeId a, NodeId b, int i) const {
    return ng + static_cast<NodeId>(i - 1) * ng * nh + a * nh + b;
  }
  NodeId h_node(NodeId b) const { return ng + static_cast<NodeId>(r) * ng * nh + b; }
  NodeId size() const { return ng + static_cast<NodeId>(r) * ng * nh + nh; }
};

inline Graph r_join(const Graph& g, const Graph& h, int r) {
  if (g.node_count() == 0 || h.node_count() == 0)
    throw Error(ErrorKind::EmptyGraph, "r_join needs nonempty graphs");
  if (r < 1) throw Error(ErrorKind::BadParams, "r_join needs r >= 1");
  const RJoinLayout L{g.node_count(), h.node_count(), r};
  std::vector<Edge> edges(g.edges());
  for (auto [a, a2] : g.edges())
    for (NodeId b = 0; b < L.nh; ++b) {
      edges.emplace_back(a, L.layer_node(a2, b, 1));
      edges.emplace_back(a2, L.layer_node(a, b, 1));
    }
  for (auto [a, a2] : g.edges())
    for (auto [b, b2] : h.edges())
      for (int i = 1; i <= r; ++i)
        for (int j = std::max(1, i - 1); j <= std::min(r, i + 1); ++j) {
          edges.emplace_back(L.layer_node(a, b, i), L.layer_node(a2, b2, j));
          edges.emplace_back(L.layer_node(a, b2, i), L.layer_node(a2, b, j));
        }
  for (auto [b, b2] : h.edges()) {
    edges.emplace_back(L.h_node(b), L.h_node(b2));
    for (NodeId a = 0; a < L.ng; ++a) {
      edges.emplace_back(L.layer_node(a, b, r), L.h_node(b2));
      edges.emplace_back(L.layer_node(a, b2, r), L.h_node(b));
    }
  }
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(L.size()));
  for (NodeId a = 0; a < L.ng; ++a) labels.push_back(g.label(a));
  for (int i = 1; i <= r; ++i)
    for (NodeId a = 0; a < L.ng; ++a)
      for (NodeId b = 0; b < L.nh; ++b)
        labels.push_back("(" + g.label(a) + "," + h.label(b) + "," + std::to_string(i) + ")");
  for (NodeId b = 0; b < L.nh; ++b) labels.push_back(h.label(b));
  return build_graph(L.size(), std::move(edges), std::move(labels));
}

struct DisjointUnion {
  Graph graph;
  std::vector<NodeId> offsets;  // part i occupies [offsets[i], offsets[i] + n_i)
};

inline DisjointUnion disjoint_union(std::span<const Graph> parts) {
  DisjointUnion out;
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  bool any_labels = std::any_of(parts.begin(), parts.end(), [](const Graph& p) { return p.has_labels(); });
  NodeId offset = 0;
  for (const Graph& p : parts) {
    out.offsets.push_back(offset);
    for (auto [u, v] : p.edges()) edges.emplace_back(u + offset, v + offset);
    if (any_labels)
      for (NodeId v = 0; v < p.node_count(); ++v) labels.push_back(p.label(v));
    offset += p.node_count();
  }
  out.graph = build_graph(offset, std::move(edges), std::move(labels));
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity and distances

struct Components {
  std::vector<int> component;  // -1 for masked-out nodes
  int count = 0;
};

inline Components connected_components(const Graph& g, const std::vector<char>* alive = nullptr) {
  Components c;
  c.component.assign(static_cast<std::size_t>(g.node_count()), -1);
  Bfs bfs(g, alive);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (c.component[v] != -1 || (alive && !(*alive)[v])) continue;
    for (NodeId w : bfs.run_from(v)) c.component[w] = c.count;
    ++c.count;
  }
  return c;
}

inline bool is_connected(const Graph& g) {
  return g.node_count() <= 1 || connected_components(g).count == 1;
}

namespace detail {

// Largest distance from `source` to any member of `targets`; throws when some
// target is unreachable.
inline int eccentricity_into(Bfs& bfs, NodeId source, std::span<const NodeId> targets) {
  bfs.run_from(source);
  int e = 0;
  for (NodeId t : targets) {
    int d = bfs.dist(t);
    if (d == kUnreached) throw Error(ErrorKind::Disconnected, "weak diameter is infinite");
    e = std::max(e, d);
  }
  return e;
}

}  // namespace detail

// Weak diameter of S measured in g (optionally restricted to `alive` nodes).
// Uses the fringe upper-bound scheme: BFS from a central root, then from the
// members of S in decreasing root distance until the lower bound closes.
inline int weak_diameter(const Graph& g, const NodeSet& S, const std::vector<char>* alive = nullptr) {
  if (S.size() <= 1) return 0;
  Bfs bfs(g, alive);
  const auto& targets = S.ids();

  // Two sweeps to find a root near the middle of a long path.
  bfs.run_from(S[0]);
  NodeId a = S[0];
  for (NodeId t : targets) {
    if (bfs.dist(t) == kUnreached) throw Error(ErrorKind::Disconnected, "weak diameter is infinite");
    if (bfs.dist(t) > bfs.dist(a)) a = t;
  }
  bfs.run_from(a);
  NodeId b = a;
  for (NodeId t : targets)
    if (bfs.dist(t) > bfs.dist(b)) b = t;
  int lb = bfs.dist(b);
  NodeId root = b;
  for (int steps = lb / 2; steps > 0; --steps)
    for (NodeId w : g.neighbors(root))
      if (bfs.dist(w) == bfs.dist(root) - 1 && (!alive || (*alive)[w])) {
        root = w;
        break;
      }

  bfs.run_from(root);
  std::vector<std::pair<int, NodeId>> by_level;
  by_level.reserve(S.size());
  for (NodeId t : targets) by_level.emplace_back(bfs.dist(t), t);
  std::sort(by_level.begin(), by_level.end(), std::greater<>());
  // The root itself may lie outside S, so its eccentricity is no lower bound.
  if (S.contains(root)) lb = std::max(lb, by_level.front().first);

  std::size_t idx = 0;
  while (idx < by_level.size()) {
    const int level = by_level[idx].first;
    if (lb >= 2 * level) break;
    while (idx < by_level.size() && by_level[idx].first == level) {
      lb = std::max(lb, detail::eccentricity_into(bfs, by_level[idx].second, targets));
      ++idx;
    }
    if (lb >= 2 * (level - 1)) break;
  }
  return lb;
}

}  // namespace lcol
