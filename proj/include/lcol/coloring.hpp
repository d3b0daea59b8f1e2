#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcol/analysis.hpp"
#include "lcol/clustering.hpp"
#include "lcol/graph.hpp"
#include "lcol/io.hpp"
#include "lcol/ledger.hpp"
#include "lcol/netdec.hpp"
#include "lcol/partition.hpp"

namespace lcol {

inline constexpr int kHidden = 0;

// Result of hiding around A: phi is aligned with A_prime and holds kHidden or
// a class in 1..chi_loc-1.
struct Hiding {
  NodeSet A;
  NodeSet A_prime;
  std::vector<int> phi;
  int chi_loc = 0;

  std::optional<int> at(NodeId v) const {
    auto it = std::lower_bound(A_prime.begin(), A_prime.end(), v);
    if (it == A_prime.end() || *it != v) return std::nullopt;
    return phi[static_cast<std::size_t>(it - A_prime.begin())];
  }
};

// Optimal colouring of g[A u N(A)] whose top class is renamed Hidden; hidden
// nodes of N(A) are dropped, so no hidden node of A' touches V \ A'.
inline Hiding hide_coloring(const Graph& g, const NodeSet& A, std::uint64_t budget = kDefaultSolverBudget) {
  if (A.empty()) throw Error(ErrorKind::BadParams, "hide_coloring needs a nonempty set");
  Hiding h;
  h.A = A;
  NodeSet B = neighborhood_of_set(g, A, 1);
  auto sub = induced_subgraph(g, B);
  auto cert = exact_chromatic_number(sub.graph, budget);
  h.chi_loc = cert.chi;
  std::vector<NodeId> keep;
  for (std::size_t i = 0; i < B.size(); ++i) {
    int c = cert.coloring[i];
    bool hidden = c == h.chi_loc;
    if (hidden && !A.contains(B[i])) continue;
    keep.push_back(B[i]);
    h.phi.push_back(hidden ? kHidden : c);
  }
  h.A_prime = NodeSet::from_sorted(std::move(keep));
  return h;
}

struct ClusterRecord {
  int cluster = 0;
  int color = 0;  // decomposition colour of the cluster
  int chi_loc = 0;
  Hiding hiding;  // for colour alpha: A = A' = C and phi in 0..chi-1
};

struct PipelineResult {
  Coloring coloring;  // values in 1..alpha(chi_hat-1)+1
  LayeredColoring layered;
  int colors_used = 0;
  int chi_hat = 0;
  bool proper = false;
  RoundLedger rounds;
  NetworkDecomposition decomposition;
  std::vector<ClusterRecord> records;

  NodeId n = 0;
  std::size_t m = 0;
  int alpha = 1;
  std::string mode;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::int64_t eccentricity_within(const Graph& g, NodeId leader, const NodeSet& S) {
  Bfs bfs(g);
  bfs.run_from(leader);
  std::int64_t e = 0;
  for (NodeId v : S) {
    if (bfs.dist(v) == kUnreached) throw Error(ErrorKind::Disconnected, "cluster not reachable from leader");
    e = std::max<std::int64_t>(e, bfs.dist(v));
  }
  return e;
}

}  // namespace detail

// Colours g from a decomposition of g^3, merging the per-cluster palettes.
inline PipelineResult color_with_decomposition(const Graph& g, const NetworkDecomposition& D,
                                               std::uint64_t budget = kDefaultSolverBudget) {
  const NodeId n = g.node_count();
  if (n == 0) throw Error(ErrorKind::EmptyGraph, "nothing to colour");
  const int alpha = D.alpha;
  {
    Graph g3 = power_graph(g, 3);
    auto rep = verify_decomposition(g3, D, alpha, D.d);
    if (!rep.ok) throw Error(ErrorKind::InvalidDecomposition, rep.violations.empty() ? "" : rep.violations[0]);
  }

  PipelineResult res;
  res.decomposition = D;
  res.alpha = alpha;
  res.n = n;
  res.m = static_cast<std::size_t>(g.edge_count());

  // Best non-hidden colour seen per node; assigned[v] records any write.
  std::vector<LayeredColor> best(static_cast<std::size_t>(n), LayeredColor::hidden());
  std::vector<char> assigned(static_cast<std::size_t>(n), 0);
  auto offer = [&](NodeId v, LayeredColor c) {
    assigned[v] = 1;
    if (best[v] < c) best[v] = c;
  };

  std::vector<std::int64_t> leader(static_cast<std::size_t>(alpha + 1), 0), gather(leader), cast(leader);
  for (std::size_t i = 0; i < D.clusters.size(); ++i) {
    const NodeSet& C = D.clusters[i];
    const int a = D.colors[i];
    ClusterRecord rec;
    rec.cluster = static_cast<int>(i);
    rec.color = a;
    if (a < alpha) {
      rec.hiding = hide_coloring(g, C, budget);
      for (std::size_t j = 0; j < rec.hiding.A_prime.size(); ++j) {
        int b = rec.hiding.phi[j];
        offer(rec.hiding.A_prime[j], b == kHidden ? LayeredColor::hidden() : LayeredColor::pair(a, b));
      }
      gather[a] = std::max(gather[a], gather_rounds(g, C, C[0]));
      cast[a] = std::max(cast[a], gather_rounds(g, C, C[0]));
    } else {
      // Smallest palette entries first: class 1 is Hidden, class b+1 is (alpha, b).
      auto sub = induced_subgraph(g, C);
      auto cert = exact_chromatic_number(sub.graph, budget);
      rec.hiding.A = rec.hiding.A_prime = C;
      rec.hiding.chi_loc = cert.chi;
      for (std::size_t j = 0; j < C.size(); ++j) {
        int b = cert.coloring[j] - 1;
        rec.hiding.phi.push_back(b);
        offer(C[j], b == 0 ? LayeredColor::hidden() : LayeredColor::pair(alpha, b));
      }
      gather[a] = std::max(gather[a], gather_rounds(g, C, C[0]));
      cast[a] = std::max(cast[a], detail::eccentricity_within(g, C[0], C));
    }
    rec.chi_loc = rec.hiding.chi_loc;
    res.chi_hat = std::max(res.chi_hat, rec.chi_loc);
    leader[a] = std::max<std::int64_t>(leader[a], weak_diameter(g, C));
    res.records.push_back(std::move(rec));
  }
  for (int a = 1; a <= alpha; ++a) {
    res.rounds.charge("coloring/leader", leader[a]);
    res.rounds.charge("coloring/gather", gather[a]);
    res.rounds.charge("coloring/broadcast", cast[a]);
  }

  if (std::find(assigned.begin(), assigned.end(), 0) != assigned.end())
    throw Error(ErrorKind::InvalidDecomposition, "decomposition does not cover every node");
  res.layered = best;
  res.coloring.resize(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) res.coloring[v] = remap_color(best[v], alpha);
  std::vector<int> used(res.coloring);
  std::sort(used.begin(), used.end());
  res.colors_used = static_cast<int>(std::unique(used.begin(), used.end()) - used.begin());
  res.proper = is_proper_coloring(g, res.coloring).proper;
  return res;
}

enum class Mode { Det, Rand };

inline BaseKind base_of(Mode m) { return m == Mode::Det ? BaseKind::Det : BaseKind::Rand; }
inline std::string to_string(Mode m) { return m == Mode::Det ? "det" : "rand"; }

// Decomposes g^3 (each simulated round costs three real ones) and colours g.
inline PipelineResult full_pipeline(const Graph& g, int alpha, Mode mode = Mode::Rand, std::uint64_t seed = 0,
                                    std::uint64_t budget = kDefaultSolverBudget) {
  if (g.node_count() == 0) throw Error(ErrorKind::EmptyGraph, "nothing to colour");
  Graph g3 = power_graph(g, 3);
  NetworkDecomposition D = network_decomposition(g3, alpha, base_of(mode), seed);
  PipelineResult res = color_with_decomposition(g, D, budget);
  RoundLedger total;
  total.absorb(D.ledger, 3, "netdec/");
  total.absorb(res.rounds);
  res.rounds = std::move(total);
  res.mode = to_string(mode);
  res.seed = seed;
  return res;
}

inline Json to_json(const PipelineResult& r) {
  return Json{{"schema", kSchemaVersion},
              {"n", r.n},
              {"m", r.m},
              {"alpha", r.alpha},
              {"mode", r.mode},
              {"seed", r.seed},
              {"colors_used", r.colors_used},
              {"proper", r.proper},
              {"rounds", r.rounds.phases()},
              {"coloring", r.coloring}};
}

}  // namespace lcol
