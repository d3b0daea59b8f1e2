#include <gtest/gtest.h>

#include <sstream>

#include "lcol/generators.hpp"
#include "lcol/local_sim.hpp"
#include "oracles.hpp"

using namespace lcol;

namespace {

// Never produces output.
struct SilentProgram {
  struct State {
    int degree;
  };
  using Message = int;
  using Output = int;
  State init(const NodeContext& c) const { return {c.degree}; }
  std::vector<Message> send(const State& s, int) const { return std::vector<Message>(static_cast<std::size_t>(s.degree), 0); }
  void receive(State&, int, std::span<const Message>) const {}
  std::optional<Output> output(const State&) const { return std::nullopt; }
};

// Outputs the port-ordered list of neighbour ids after one round.
struct PortProgram {
  struct State {
    std::uint64_t id;
    int degree;
    std::vector<std::uint64_t> heard;
    bool done = false;
  };
  using Message = std::uint64_t;
  using Output = std::vector<std::uint64_t>;
  State init(const NodeContext& c) const { return {c.id, c.degree, {}}; }
  std::vector<Message> send(const State& s, int) const { return std::vector<Message>(static_cast<std::size_t>(s.degree), s.id); }
  void receive(State& s, int, std::span<const Message> in) const {
    s.heard.assign(in.begin(), in.end());
    s.done = true;
  }
  std::optional<Output> output(const State& s) const {
    if (!s.done) return std::nullopt;
    return s.heard;
  }
};

}  // namespace

TEST(RunSync, DegreeAtRoundZero) {
  auto r = run_sync(complete_graph(3), DegreeProgram{}, 5, 0);
  EXPECT_EQ(r.outputs, (std::vector<int>{2, 2, 2}));
  EXPECT_EQ(r.rounds, 0);
}

TEST(RunSync, FloodBallSize) {
  auto r = run_sync(path_graph(5), BallSizeProgram{2}, 2, 0);
  EXPECT_EQ(r.outputs[2], 5);
  EXPECT_EQ(r.outputs[0], 3);
  EXPECT_EQ(r.rounds, 2);
}

TEST(RunSync, BfsParityOnP8) {
  Graph g = path_graph(8);
  SyncOptions opt;
  opt.inputs.assign(8, "");
  opt.inputs[0] = "root";  // node 0 carries the minimum id
  auto r = run_sync(g, BfsParityProgram{}, 20, 0, opt);
  EXPECT_EQ(r.rounds, 7);
  EXPECT_TRUE(oracle::proper(g, r.outputs));
}

TEST(RunSync, NotHalted) {
  try {
    run_sync(cycle_graph(4), SilentProgram{}, 3, 0);
    FAIL() << "expected NotHalted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHalted);
  }
  EXPECT_THROW(run_sync(cycle_graph(4), DegreeProgram{}, -1, 0), Error);
}

TEST(RunSync, PortsFollowAscendingNeighbourIndex) {
  Graph g = build_graph(4, {{0, 3}, {0, 1}, {0, 2}});
  SyncOptions opt;
  opt.ids = {40, 10, 30, 20};
  auto r = run_sync(g, PortProgram{}, 1, 0, opt);
  EXPECT_EQ(r.outputs[0], (std::vector<std::uint64_t>{10, 30, 20}));
}

TEST(RunSync, RejectsDuplicateIds) {
  SyncOptions opt;
  opt.ids = {1, 1, 2};
  EXPECT_THROW(run_sync(path_graph(3), DegreeProgram{}, 1, 0, opt), Error);
}

TEST(RunSync, ReproducibleUnderPermutedIds) {
  Rng rng(7);
  Graph g = oracle::random_connected(30, 0.05, rng);
  SyncOptions opt;
  for (auto p : oracle::random_permutation(30, rng)) opt.ids.push_back(1000 + static_cast<std::uint64_t>(p));
  auto a = run_sync(g, ViewDigestProgram{2}, 2, 99, opt);
  auto b = run_sync(g, ViewDigestProgram{2}, 2, 99, opt);
  EXPECT_EQ(a.outputs, b.outputs);
  EXPECT_EQ(a.rounds, b.rounds);
  auto c = run_sync(g, ViewDigestProgram{2}, 2, 100, opt);
  EXPECT_NE(a.outputs, c.outputs);
}

TEST(RunSync, TraceIsJsonLines) {
  std::ostringstream trace;
  SyncOptions opt;
  opt.trace = &trace;
  run_sync(path_graph(3), BallSizeProgram{1}, 1, 0, opt);
  std::istringstream in(trace.str());
  std::string line;
  int sends = 0;
  while (std::getline(in, line)) {
    Json j = Json::parse(line);
    EXPECT_TRUE(j.contains("round") && j.contains("node") && j.contains("payload_size"));
    sends += j["action"] == "send";
  }
  EXPECT_EQ(sends, 4);  // one per port
}

// Toggling a pair whose endpoints are both beyond distance T of v cannot change
// v's output after T rounds.
TEST(NonSignaling, FarMutationsLeaveOutputsUnchanged) {
  Rng rng(123);
  for (int t = 0; t < 10; ++t) {
    const int T = 1 + static_cast<int>(rng.below(3));
    Graph g = oracle::random_connected(40, 0.02, rng);
    NodeId a = static_cast<NodeId>(rng.below(40)), b = static_cast<NodeId>(rng.below(39));
    if (b >= a) ++b;
    std::vector<Edge> e = g.edges();
    auto it = std::find(e.begin(), e.end(), Edge{std::min(a, b), std::max(a, b)});
    if (it != e.end())
      e.erase(it);
    else
      e.emplace_back(a, b);
    Graph h = build_graph(40, e);
    auto before = run_sync(g, ViewDigestProgram{T}, T, 5).outputs;
    auto after = run_sync(h, ViewDigestProgram{T}, T, 5).outputs;
    auto dg = oracle::all_pairs(g), dh = oracle::all_pairs(h);
    int checked = 0;
    for (NodeId v = 0; v < 40; ++v) {
      if (std::min({dg[v][a], dg[v][b], dh[v][a], dh[v][b]}) <= T) continue;
      EXPECT_EQ(before[v], after[v]) << "node " << v << " T=" << T;
      ++checked;
    }
    EXPECT_GT(checked, 0);
  }
}

TEST(Ledger, ChargesAndAccountingIdentity) {
  RoundLedger empty;
  EXPECT_EQ(empty.total(), 0);

  RoundLedger L;
  EXPECT_EQ(charge_power_simulation(L, "sim", 5, 3), 15);
  // A diameter-4 cluster (P5) with one boundary node on each side.
  Graph p7 = path_graph(7);
  NodeSet cluster = NodeSet::from_sorted({1, 2, 3, 4, 5});
  EXPECT_EQ(weak_diameter(p7, cluster), 4);
  EXPECT_EQ(charge_gather(L, "gather", p7, cluster, 1), 5);
  EXPECT_EQ(charge_broadcast(L, "broadcast", p7, cluster, 1), 5);
  L.charge("sim", 2);
  std::int64_t sum = 0;
  for (auto& [name, r] : L.phases()) sum += r;
  EXPECT_EQ(L.total(), sum);
  EXPECT_EQ(L.phases().at("sim"), 17);
  EXPECT_THROW(L.charge("x", -1), Error);

  RoundLedger M;
  M.absorb(L, 3, "p/");
  EXPECT_EQ(M.total(), 3 * L.total());
  EXPECT_EQ(M.phases().at("p/gather"), 15);
}
