#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "lcol/analysis.hpp"
#include "lcol/graph.hpp"
#include "lcol/io.hpp"
#include "lcol/ledger.hpp"
#include "lcol/partition.hpp"
#include "lcol/rng.hpp"

namespace lcol {

enum class BaseKind { Rand, Det };

inline constexpr double kDefaultBeta = 0.2;

inline std::string to_string(BaseKind b) { return b == BaseKind::Rand ? "rand" : "det"; }

namespace detail {

// Output of a base clusterer run on the implicit power graph (G[U])^k.
struct BaseRun {
  std::vector<NodeSet> clusters;  // host ids
  std::vector<NodeId> unclustered;
  int power_diameter = 0;       // max weak diameter in power-graph hops
  std::int64_t power_rounds = 0;
};

inline std::vector<char> full_mask(const Graph& g) { return std::vector<char>(static_cast<std::size_t>(g.node_count()), 1); }

inline int power_hops(int d, int k) { return (d + k - 1) / k; }

inline int max_power_diameter(const Graph& g, const std::vector<NodeSet>& clusters, const std::vector<char>& alive,
                              int k) {
  int d = 0;
  for (const auto& c : clusters) d = std::max(d, power_hops(weak_diameter(g, c, &alive), k));
  return d;
}

// Exponential-shift Voronoi on (G[U])^k. Each node of U draws a shift; node u
// joins the centre minimising s_c + ceil(dist(c,u)/k), where s_c = max shift -
// shift_c. A label (cost, free steps, centre) moves along an edge as
// (cost, free-1) while free > 0 and as (cost+1, k-1) otherwise; this order is
// monotone, so Dijkstra yields connected cells. Exact cost ties between
// centres are broken by the larger number of free steps first, then by id.
inline BaseRun rand_voronoi(const Graph& g, const std::vector<char>& alive, int k, double beta, std::uint64_t seed) {
  const NodeId n = g.node_count();
  BaseRun out;
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < n; ++v)
    if (alive[v]) nodes.push_back(v);
  if (nodes.empty()) return out;

  const double cap = std::ceil((2.0 / beta) * std::log(static_cast<double>(nodes.size())));
  Rng rng(seed);
  std::vector<double> shift(static_cast<std::size_t>(n), 0.0);
  double smax = 0.0;
  for (NodeId v : nodes) {
    shift[v] = std::min(rng.exponential(beta), cap);
    smax = std::max(smax, shift[v]);
  }

  using Label = std::tuple<double, int, NodeId>;  // (cost, -free, centre)
  const Label inf{std::numeric_limits<double>::infinity(), 0, 0};
  std::vector<Label> best(static_cast<std::size_t>(n), inf);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::priority_queue<std::pair<Label, NodeId>, std::vector<std::pair<Label, NodeId>>, std::greater<>> pq;
  for (NodeId v : nodes) {
    best[v] = Label{smax - shift[v], 0, v};
    pq.push({best[v], v});
  }
  while (!pq.empty()) {
    auto [lab, u] = pq.top();
    pq.pop();
    if (done[u] || lab != best[u]) continue;
    done[u] = 1;
    auto [cost, negfree, centre] = lab;
    Label next = negfree < 0 ? Label{cost, negfree + 1, centre} : Label{cost + 1.0, -(k - 1), centre};
    for (NodeId w : g.neighbors(u))
      if (alive[w] && !done[w] && next < best[w]) {
        best[w] = next;
        pq.push({next, w});
      }
  }

  // A node is cut when a different cell lies within k hops of G[U]; carry at
  // most two distinct cell ids per node for k rounds.
  constexpr NodeId none = -1;
  std::vector<std::array<NodeId, 2>> seen(static_cast<std::size_t>(n), {none, none}), nxt;
  auto add = [](std::array<NodeId, 2>& s, NodeId c) {
    if (c == none || c == s[0] || c == s[1]) return;
    if (s[0] == none || c < s[0]) {
      s[1] = s[0];
      s[0] = c;
    } else if (s[1] == none || c < s[1]) {
      s[1] = c;
    }
  };
  for (NodeId v : nodes) seen[v][0] = std::get<2>(best[v]);
  for (int round = 0; round < k; ++round) {
    nxt = seen;
    for (NodeId v : nodes)
      for (NodeId w : g.neighbors(v))
        if (alive[w]) {
          add(nxt[v], seen[w][0]);
          add(nxt[v], seen[w][1]);
        }
    seen.swap(nxt);
  }

  std::vector<std::vector<NodeId>> cells(static_cast<std::size_t>(n));
  for (NodeId v : nodes) {
    if (seen[v][1] != none)
      out.unclustered.push_back(v);
    else
      cells[std::get<2>(best[v])].push_back(v);
  }
  for (auto& c : cells)
    if (!c.empty()) out.clusters.push_back(NodeSet::from_sorted(std::move(c)));
  out.power_diameter = max_power_diameter(g, out.clusters, alive, k);
  out.power_rounds = static_cast<std::int64_t>(std::ceil(smax)) + 1;
  return out;
}

// Sequential ball carving on (G[U])^k with processed nodes removed. One power
// hop is a walk of at most k edges in G[U]; only its endpoints have to be
// unprocessed.
inline BaseRun det_carving(const Graph& g, const std::vector<char>& alive, int k) {
  const NodeId n = g.node_count();
  BaseRun out;
  std::vector<char> processed(static_cast<std::size_t>(n), 0), in_ball(static_cast<std::size_t>(n), 0);
  Bfs bfs(g, &alive);
  NodeId cursor = 0;
  while (true) {
    while (cursor < n && (!alive[cursor] || processed[cursor])) ++cursor;
    if (cursor == n) break;

    std::vector<NodeId> ball{cursor};
    std::vector<NodeId> frontier{cursor};
    in_ball[cursor] = 1;
    std::vector<NodeId> sphere;
    while (true) {
      sphere.clear();
      for (NodeId w : bfs.run(frontier, k))
        if (!processed[w] && !in_ball[w]) {
          in_ball[w] = 1;
          sphere.push_back(w);
        }
      if (ball.size() + sphere.size() < 2 * ball.size()) break;
      ball.insert(ball.end(), sphere.begin(), sphere.end());
      frontier = sphere;
      if (sphere.empty()) break;
    }
    for (NodeId v : ball) processed[v] = 1;
    for (NodeId v : sphere) {
      processed[v] = 1;
      out.unclustered.push_back(v);
    }
    out.clusters.push_back(NodeSet::from_unsorted(std::move(ball)));
  }
  std::sort(out.unclustered.begin(), out.unclustered.end());
  out.power_diameter = max_power_diameter(g, out.clusters, alive, k);
  // Sequential: report the number of carving steps as structural rounds.
  out.power_rounds = static_cast<std::int64_t>(out.clusters.size());
  return out;
}

inline void finish_meta(const Graph& g, Clustering& cl) {
  const NodeId n = g.node_count();
  cl.lambda = n == 0 ? 0.0 : static_cast<double>(cl.unclustered.size()) / n;
  bool disconnected = false;
  cl.max_diameter = max_weak_diameter(g, cl.clusters, disconnected);
  if (disconnected) throw Error(ErrorKind::GuaranteeViolated, "cluster with infinite weak diameter");
}

inline Clustering from_base(const Graph& g, BaseRun run, const std::string& phase) {
  Clustering cl;
  cl.clusters = std::move(run.clusters);
  cl.unclustered = NodeSet::from_unsorted(std::move(run.unclustered));
  cl.ledger.charge(phase, run.power_rounds);
  finish_meta(g, cl);
  return cl;
}

}  // namespace detail

inline Clustering base_cluster_rand(const Graph& g, double beta = kDefaultBeta, std::uint64_t seed = 0) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::BadParams, "beta must lie in (0, 1)");
  return detail::from_base(g, detail::rand_voronoi(g, detail::full_mask(g), 1, beta, derive_seed(seed, {})),
                           "voronoi");
}

inline Clustering base_cluster_det(const Graph& g) {
  return detail::from_base(g, detail::det_carving(g, detail::full_mask(g), 1), "structural");
}

// Smallest distance between two different clusters, capped at `limit`.
inline int min_cluster_distance(const Graph& g, const std::vector<NodeSet>& clusters, int limit,
                                const std::vector<char>* alive = nullptr) {
  const NodeId n = g.node_count();
  std::vector<int> owner(static_cast<std::size_t>(n), -1), dist(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> queue;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (NodeId v : clusters[i]) {
      if (owner[v] != -1) return 0;
      owner[v] = static_cast<int>(i);
      dist[v] = 0;
      queue.push_back(v);
    }
  int best = limit;
  const int depth = limit / 2;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    NodeId u = queue[h];
    for (NodeId w : g.neighbors(u)) {
      if (alive && !(*alive)[w]) continue;
      if (owner[w] == -1) {
        if (dist[u] >= depth) continue;
        owner[w] = owner[u];
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      } else if (owner[w] != owner[u]) {
        best = std::min(best, dist[u] + 1 + dist[w]);
      }
    }
  }
  return best;
}

struct EpsParams {
  int R = 0;
  int iterations = 0;
};

inline EpsParams eps_params(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorKind::BadParams, "eps must lie in (0, 1]");
  constexpr double slack = 1e-9;  // keeps exact powers of two exact
  EpsParams p;
  p.R = static_cast<int>(std::ceil(4.0 / eps - slack));
  p.iterations = static_cast<int>(std::ceil(2.0 * std::log2(1.0 / eps) - slack));
  p.iterations = std::max(p.iterations, 0);
  return p;
}

namespace detail {

inline Clustering eps_cluster_once(const Graph& g, double eps, BaseKind base, std::uint64_t seed, double beta) {
  const NodeId n = g.node_count();
  const auto [R, iterations] = eps_params(eps);
  const int k = 2 * R + 1;

  Clustering cl;
  cl.R = R;
  cl.iterations = iterations;
  std::vector<char> alive = full_mask(g);
  std::vector<NodeId> deleted;
  Bfs bfs(g, &alive);

  for (int it = 0; it < iterations; ++it) {
    if (std::none_of(alive.begin(), alive.end(), [](char a) { return a != 0; })) break;
    BaseRun run = base == BaseKind::Rand ? rand_voronoi(g, alive, k, beta, derive_seed(seed, {std::uint64_t(it)}))
                                         : det_carving(g, alive, k);
    cl.base_diameter = std::max(cl.base_diameter, run.power_diameter);
    charge_power_simulation(cl.ledger, base == BaseKind::Rand ? "base" : "base_structural", run.power_rounds, k);

    std::vector<NodeSet> emitted;
    std::vector<NodeId> removed;
    std::int64_t gather = 0, broadcast = 0;
    for (const NodeSet& c : run.clusters) {
      bfs.run(c.ids(), R);
      std::vector<std::int64_t> layer(static_cast<std::size_t>(R + 1), 0);
      for (NodeId v : bfs.visited()) ++layer[bfs.dist(v)];
      int jstar = 1;
      for (int j = 2; j <= R; ++j)
        if (layer[j] < layer[jstar]) jstar = j;
      std::vector<NodeId> keep;
      for (NodeId v : bfs.visited()) {
        if (bfs.dist(v) < jstar)
          keep.push_back(v);
        else if (bfs.dist(v) == jstar)
          removed.push_back(v);
      }
      // Leader (min id) collects N_R(C) and then broadcasts j* into N_{j*}(C).
      Bfs lead(g, &alive);
      lead.run_from(c[0], k * run.power_diameter + R);
      std::int64_t e_gather = 0, e_cast = 0;
      for (NodeId v : bfs.visited()) {
        e_gather = std::max<std::int64_t>(e_gather, lead.dist(v));
        if (bfs.dist(v) <= jstar) e_cast = std::max<std::int64_t>(e_cast, lead.dist(v));
      }
      gather = std::max(gather, e_gather);
      broadcast = std::max(broadcast, e_cast);
      emitted.push_back(NodeSet::from_unsorted(std::move(keep)));
    }
    cl.ledger.charge("sphere_gather", gather);
    cl.ledger.charge("broadcast", broadcast);

    if (min_cluster_distance(g, emitted, 4, &alive) < 4)
      throw Error(ErrorKind::GuaranteeViolated, "clusters of one iteration closer than 4 in the working graph");

    for (auto& c : emitted) {
      for (NodeId v : c) alive[v] = 0;
      cl.clusters.push_back(std::move(c));
      cl.cluster_iteration.push_back(it);
    }
    for (NodeId v : removed) {
      alive[v] = 0;
      deleted.push_back(v);
    }
  }
  for (NodeId v = 0; v < n; ++v)
    if (alive[v]) deleted.push_back(v);
  cl.unclustered = NodeSet::from_unsorted(std::move(deleted));
  cl.diameter_bound = static_cast<std::int64_t>(k) * cl.base_diameter + 2 * R - 2;
  finish_meta(g, cl);

  if (static_cast<double>(cl.unclustered.size()) > eps * n + 1e-9)
    throw Error(ErrorKind::GuaranteeViolated, std::to_string(cl.unclustered.size()) +
                                                  " unclustered nodes exceed eps * n = " + std::to_string(eps * n));
  if (cl.max_diameter > std::max<std::int64_t>(cl.diameter_bound, 0))
    throw Error(ErrorKind::GuaranteeViolated, "cluster diameter " + std::to_string(cl.max_diameter) +
                                                  " exceeds bound " + std::to_string(cl.diameter_bound));
  if (min_cluster_distance(g, cl.clusters, 2) < 2)
    throw Error(ErrorKind::GuaranteeViolated, "adjacent clusters");
  return cl;
}

}  // namespace detail

inline constexpr int kEpsClusterRetries = 3;

// Bootstrapped eps-clustering. A randomized base that misses its guarantee is
// rerun with seed+1, at most kEpsClusterRetries times.
inline Clustering eps_cluster(const Graph& g, double eps, BaseKind base = BaseKind::Rand, std::uint64_t seed = 0,
                              double beta = kDefaultBeta) {
  eps_params(eps);
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::BadParams, "beta must lie in (0, 1)");
  for (int attempt = 0;; ++attempt) {
    try {
      Clustering cl = detail::eps_cluster_once(g, eps, base, seed + static_cast<std::uint64_t>(attempt), beta);
      cl.retries = attempt;
      return cl;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GuaranteeViolated || base != BaseKind::Rand || attempt >= kEpsClusterRetries) throw;
    }
  }
}

inline Json to_json(const Clustering& cl) {
  Json clusters = Json::array();
  for (const auto& c : cl.clusters) clusters.push_back(node_set_to_json(c));
  return Json{{"schema", kSchemaVersion},
              {"clusters", clusters},
              {"unclustered", node_set_to_json(cl.unclustered)},
              {"lambda", cl.lambda},
              {"max_diameter", cl.max_diameter},
              {"rounds", cl.ledger.phases()}};
}

}  // namespace lcol
