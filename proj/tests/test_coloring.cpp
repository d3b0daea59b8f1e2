#include <gtest/gtest.h>

#include "lcol/coloring.hpp"
#include "lcol/generators.hpp"
#include "oracles.hpp"

using namespace lcol;

namespace {

NodeSet ns(std::vector<NodeId> v) { return NodeSet::from_unsorted(std::move(v)); }

// The three clauses every hiding must satisfy.
void expect_contract(const Graph& g, const Hiding& h) {
  NodeSet B = neighborhood_of_set(g, h.A, 1);
  EXPECT_TRUE(is_subset(h.A, h.A_prime));
  EXPECT_TRUE(is_subset(h.A_prime, B));
  for (std::size_t i = 0; i < h.A_prime.size(); ++i) {
    NodeId u = h.A_prime[i];
    EXPECT_GE(h.phi[i], 0);
    EXPECT_LT(h.phi[i], h.chi_loc);
    for (NodeId w : g.neighbors(u)) {
      auto pw = h.at(w);
      if (pw) EXPECT_NE(*pw, h.phi[i]) << "edge " << u << "-" << w;
      if (!pw) EXPECT_NE(h.phi[i], kHidden) << "hidden " << u << " touches " << w << " outside A'";
    }
  }
}

}  // namespace

TEST(Hiding, PathMiddle) {
  Graph p = path_graph(3);
  Hiding h = hide_coloring(p, ns({1}));
  expect_contract(p, h);
  EXPECT_EQ(h.chi_loc, 2);
  if (h.at(1) == kHidden) {
    EXPECT_EQ(h.A_prime, NodeSet::range(3));
    EXPECT_EQ(h.at(0), 1);
    EXPECT_EQ(h.at(2), 1);
  }
}

TEST(Hiding, Triangle) {
  Graph k3 = complete_graph(3);
  Hiding h = hide_coloring(k3, ns({0}));
  expect_contract(k3, h);
  EXPECT_EQ(h.chi_loc, 3);
  if (h.at(0) == kHidden) {
    EXPECT_EQ(h.A_prime, NodeSet::range(3));
    std::vector<int> rest{*h.at(1), *h.at(2)};
    std::sort(rest.begin(), rest.end());
    EXPECT_EQ(rest, (std::vector<int>{1, 2}));
  }
}

TEST(Hiding, C4OppositeNodes) {
  Graph c4 = cycle_graph(4);
  expect_contract(c4, hide_coloring(c4, ns({0, 2})));
}

TEST(Hiding, ContractOnRandomSets) {
  Rng rng(64);
  for (int t = 0; t < 50; ++t) {
    Graph g = oracle::random_connected(20, 0.1, rng);
    std::vector<NodeId> a;
    for (NodeId v = 0; v < 20; ++v)
      if (rng.bernoulli(0.15)) a.push_back(v);
    if (a.empty()) a.push_back(0);
    expect_contract(g, hide_coloring(g, ns(a)));
  }
  EXPECT_THROW(hide_coloring(path_graph(3), NodeSet{}), Error);
}

TEST(Remap, SpotChecks) {
  EXPECT_EQ(remap_color(LayeredColor::hidden(), 2), 1);
  EXPECT_EQ(remap_color(LayeredColor::pair(1, 1), 2), 2);
  EXPECT_EQ(remap_color(LayeredColor::pair(3, 2), 3), 7);
  EXPECT_EQ(3 * (3 - 1) + 1, 7);
}

TEST(ColorWithDecomposition, C4TrivialDecomposition) {
  Graph c4 = cycle_graph(4);
  NetworkDecomposition D;
  D.alpha = 1;
  D.clusters = {NodeSet::range(4)};
  D.colors = {1};
  D.d = 2;
  auto res = color_with_decomposition(c4, D);
  EXPECT_TRUE(res.proper);
  EXPECT_TRUE(oracle::proper(c4, res.coloring));
  for (int c : res.coloring) EXPECT_TRUE(c == 1 || c == 2);
}

TEST(ColorWithDecomposition, RejectsInvalidDecomposition) {
  Graph p = path_graph(4);
  NetworkDecomposition D;
  D.alpha = 2;
  D.clusters = {ns({0, 1}), ns({2, 3})};
  D.colors = {1, 1};  // adjacent in p^3 with equal colour
  D.d = 1;
  try {
    color_with_decomposition(p, D);
    FAIL() << "expected InvalidDecomposition";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDecomposition);
  }
  D.clusters = {ns({0, 1})};
  D.colors = {1};
  EXPECT_THROW(color_with_decomposition(p, D), Error);
}

TEST(Pipeline, Grid8Alpha2) {
  Graph g = grid_graph(8, 8);
  for (Mode m : {Mode::Det, Mode::Rand}) {
    auto res = full_pipeline(g, 2, m, 1);
    EXPECT_TRUE(res.proper);
    EXPECT_TRUE(oracle::proper(g, res.coloring));
    EXPECT_LE(res.colors_used, 3);
    EXPECT_LE(res.colors_used, 2 * (res.chi_hat - 1) + 1);
  }
}

TEST(Pipeline, BipartiteAlphaTwoAndThree) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    Graph g = random_bipartite(400, 5.0 / 400, 70 + s);
    for (Mode m : {Mode::Det, Mode::Rand}) {
      auto r2 = full_pipeline(g, 2, m, s);
      EXPECT_TRUE(r2.proper);
      EXPECT_LE(r2.colors_used, 3);
      auto r3 = full_pipeline(g, 3, m, s);
      EXPECT_TRUE(r3.proper);
      EXPECT_LE(r3.colors_used, 4);
      for (int c : r3.coloring) EXPECT_TRUE(c >= 1 && c <= 4);
    }
  }
}

TEST(Pipeline, Clique) {
  for (NodeId q = 2; q <= 7; ++q) {
    auto res = full_pipeline(complete_graph(q), 2, Mode::Rand, q);
    EXPECT_TRUE(res.proper);
    EXPECT_EQ(res.colors_used, q);
    EXPECT_LE(res.colors_used, 2 * (q - 1) + 1);
  }
}

TEST(Pipeline, OddCyclesAndPetersen) {
  for (Graph g : {cycle_graph(9), cycle_graph(101), petersen_graph()}) {
    auto res = full_pipeline(g, 2, Mode::Det);
    EXPECT_TRUE(res.proper);
    EXPECT_LE(res.colors_used, 2 * (res.chi_hat - 1) + 1);
  }
}

TEST(Pipeline, LedgerAndJson) {
  auto res = full_pipeline(grid_graph(10, 10), 2, Mode::Rand, 4);
  std::int64_t sum = 0;
  bool netdec = false;
  for (auto& [name, r] : res.rounds.phases()) {
    sum += r;
    netdec |= name.rfind("netdec/", 0) == 0;
  }
  EXPECT_EQ(sum, res.rounds.total());
  EXPECT_TRUE(netdec);
  EXPECT_GT(res.rounds.phases().at("coloring/gather"), 0);
  Json j = to_json(res);
  EXPECT_EQ(j["n"], 100);
  EXPECT_EQ(j["mode"], "rand");
  EXPECT_EQ(j["coloring"].size(), 100u);
  EXPECT_TRUE(j["proper"].get<bool>());
  EXPECT_THROW(full_pipeline(Graph{}, 2), Error);
}
