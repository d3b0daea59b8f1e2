#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lcol/analysis.hpp"
#include "lcol/clustering.hpp"
#include "lcol/graph.hpp"
#include "lcol/io.hpp"
#include "lcol/partition.hpp"

namespace lcol {

struct NetDecOptions {
  int g_estimate = 0;  // 0: ceil(log2 n), at least 1
  double beta = kDefaultBeta;
};

inline int default_g_estimate(NodeId n) {
  return std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(std::max<NodeId>(n, 1))))));
}

// eps = (g / n)^(1/alpha), clamped into (0, 1].
inline double netdec_eps(NodeId n, int alpha, int g_estimate) {
  double e = std::pow(static_cast<double>(g_estimate) / std::max<NodeId>(n, 1), 1.0 / alpha);
  return std::min(1.0, e);
}

// alpha - 1 rounds of eps-clustering on the survivors, then every connected
// survivor component becomes a cluster of colour alpha.
inline NetworkDecomposition network_decomposition(const Graph& g, int alpha, BaseKind base = BaseKind::Rand,
                                                  std::uint64_t seed = 0, const NetDecOptions& opt = {}) {
  if (alpha < 1) throw Error(ErrorKind::BadParams, "alpha must be >= 1");
  const NodeId n = g.node_count();
  NetworkDecomposition D;
  D.alpha = alpha;
  const int ghat = opt.g_estimate > 0 ? opt.g_estimate : default_g_estimate(n);
  const double eps = netdec_eps(n, alpha, ghat);

  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  for (int colour = 1; colour < alpha; ++colour) {
    std::vector<NodeId> keep;
    for (NodeId v = 0; v < n; ++v)
      if (alive[v]) keep.push_back(v);
    if (keep.empty()) break;
    auto sub = induced_subgraph(g, NodeSet::from_sorted(std::move(keep)));
    Clustering cl = eps_cluster(sub.graph, eps, base, derive_seed(seed, {std::uint64_t(colour)}), opt.beta);
    D.ledger.absorb(cl.ledger, 1, "pass" + std::to_string(colour) + "/");
    for (const auto& c : cl.clusters) {
      std::vector<NodeId> host;
      host.reserve(c.size());
      for (NodeId v : c) {
        host.push_back(sub.to_host[v]);
        alive[sub.to_host[v]] = 0;
      }
      D.clusters.push_back(NodeSet::from_sorted(std::move(host)));
      D.colors.push_back(colour);
    }
  }

  auto comps = connected_components(g, &alive);
  std::vector<std::vector<NodeId>> parts(static_cast<std::size_t>(comps.count));
  for (NodeId v = 0; v < n; ++v)
    if (comps.component[v] >= 0) parts[comps.component[v]].push_back(v);
  int last_diam = 0;
  for (auto& p : parts) {
    NodeSet s = NodeSet::from_sorted(std::move(p));
    last_diam = std::max(last_diam, weak_diameter(g, s, &alive));
    D.clusters.push_back(std::move(s));
    D.colors.push_back(alpha);
  }
  // Components learn their extent by flooding.
  D.ledger.charge("components", last_diam);

  bool disconnected = false;
  D.d = detail::max_weak_diameter(g, D.clusters, disconnected);
  auto rep = verify_decomposition(g, D, alpha, D.d);
  if (disconnected || !rep.ok)
    throw Error(ErrorKind::GuaranteeViolated,
                "network decomposition failed verification: " + (rep.violations.empty() ? "" : rep.violations[0]));
  return D;
}

inline Json to_json(const NetworkDecomposition& D) {
  Json clusters = Json::array();
  for (const auto& c : D.clusters) clusters.push_back(node_set_to_json(c));
  return Json{{"schema", kSchemaVersion}, {"clusters", clusters}, {"colors", D.colors},
              {"alpha", D.alpha},         {"d", D.d},             {"rounds", D.ledger.phases()}};
}

}  // namespace lcol
