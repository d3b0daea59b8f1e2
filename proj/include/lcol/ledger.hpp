#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>

#include "lcol/graph.hpp"

namespace lcol {

// Charged LOCAL rounds, broken down per phase.
class RoundLedger {
 public:
  void charge(const std::string& phase, std::int64_t rounds) {
    if (rounds < 0) throw Error(ErrorKind::BadParams, "negative round charge");
    phases_[phase] += rounds;
    total_ += rounds;
  }

  // Adds every phase of `other`, scaled by `factor`, under an optional prefix.
  void absorb(const RoundLedger& other, std::int64_t factor = 1, const std::string& prefix = "") {
    for (const auto& [name, r] : other.phases_) charge(prefix + name, r * factor);
  }

  std::int64_t total() const { return total_; }
  const std::map<std::string, std::int64_t>& phases() const { return phases_; }

 private:
  std::map<std::string, std::int64_t> phases_;
  std::int64_t total_ = 0;
};

// Rounds for the leader to reach every node of S and of its neighbourhood.
inline std::int64_t gather_rounds(const Graph& g, const NodeSet& S, NodeId leader,
                                  const std::vector<char>* alive = nullptr) {
  Bfs bfs(g, alive);
  bfs.run_from(leader);
  int e = 0;
  for (NodeId v : S) {
    if (bfs.dist(v) == kUnreached) throw Error(ErrorKind::Disconnected, "cluster not reachable from leader");
    e = std::max(e, bfs.dist(v));
    for (NodeId w : g.neighbors(v))
      if (bfs.dist(w) != kUnreached) e = std::max(e, bfs.dist(w));
  }
  return e;
}

inline std::int64_t charge_gather(RoundLedger& ledger, const std::string& phase, const Graph& g, const NodeSet& S,
                                  NodeId leader) {
  auto r = gather_rounds(g, S, leader);
  ledger.charge(phase, r);
  return r;
}

// A broadcast retraces the gather tree, so it costs the same.
inline std::int64_t charge_broadcast(RoundLedger& ledger, const std::string& phase, const Graph& g,
                                     const NodeSet& S, NodeId leader) {
  return charge_gather(ledger, phase, g, S, leader);
}

// One round of G^k costs k rounds of G.
inline constexpr std::int64_t power_simulation_rounds(std::int64_t base_rounds, std::int64_t k) {
  return base_rounds * k;
}

inline std::int64_t charge_power_simulation(RoundLedger& ledger, const std::string& phase,
                                            std::int64_t base_rounds, std::int64_t k) {
  auto r = power_simulation_rounds(base_rounds, k);
  ledger.charge(phase, r);
  return r;
}

}  // namespace lcol
