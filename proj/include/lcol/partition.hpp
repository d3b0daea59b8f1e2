#pragma once

#include <vector>

#include "lcol/graph.hpp"
#include "lcol/ledger.hpp"

namespace lcol {

// Disjoint, mutually non-adjacent clusters plus the unclustered remainder.
struct Clustering {
  std::vector<NodeSet> clusters;
  NodeSet unclustered;
  double lambda = 0.0;    // |unclustered| / n
  int max_diameter = 0;   // largest weak diameter in the host graph
  RoundLedger ledger;

  // Filled in by eps_cluster.
  int R = 0;
  int iterations = 0;
  int base_diameter = 0;            // largest base cluster diameter, in power-graph hops
  std::int64_t diameter_bound = 0;  // (2R+1) * base_diameter + 2R - 2
  std::vector<int> cluster_iteration;
  int retries = 0;
};

struct NetworkDecomposition {
  std::vector<NodeSet> clusters;
  std::vector<int> colors;  // per cluster, in 1..alpha
  int alpha = 1;
  int d = 0;
  RoundLedger ledger;
};

}  // namespace lcol
