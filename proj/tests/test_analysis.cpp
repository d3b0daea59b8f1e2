#include <gtest/gtest.h>

#include "lcol/analysis.hpp"
#include "lcol/generators.hpp"
#include "lcol/gadgets.hpp"
#include "oracles.hpp"

using namespace lcol;

namespace {

NodeSet ns(std::vector<NodeId> v) { return NodeSet::from_unsorted(std::move(v)); }

bool has_triangle(const Graph& g) {
  const NodeId n = g.node_count();
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      for (NodeId c = b + 1; c < n; ++c)
        if (g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)) return true;
  return false;
}

}  // namespace

TEST(Properness, Examples) {
  Graph k2 = complete_graph(2);
  EXPECT_TRUE(is_proper_coloring(k2, Coloring{1, 2}).proper);
  auto bad = is_proper_coloring(k2, Coloring{1, 1});
  EXPECT_FALSE(bad.proper);
  EXPECT_EQ(bad.violation, (Edge{0, 1}));
  auto c5 = is_proper_coloring(cycle_graph(5), Coloring{1, 2, 1, 2, 1});
  EXPECT_FALSE(c5.proper);
  EXPECT_EQ(c5.violation, (Edge{0, 4}));  // the edge {4,0}, stored with u < v
}

TEST(Properness, HiddenComparesEqualOnlyToHidden) {
  Graph p = path_graph(3);
  LayeredColoring a{LayeredColor::hidden(), LayeredColor::pair(1, 1), LayeredColor::hidden()};
  EXPECT_TRUE(is_proper_coloring(p, a).proper);
  LayeredColoring b{LayeredColor::hidden(), LayeredColor::hidden(), LayeredColor::pair(1, 1)};
  EXPECT_FALSE(is_proper_coloring(p, b).proper);
}

TEST(Chromatic, Examples) {
  EXPECT_EQ(exact_chromatic_number(complete_graph(4)).chi, 4);
  EXPECT_EQ(exact_chromatic_number(cycle_graph(5)).chi, 3);
  Graph g = rjoin_gadget(2, 3, 2);
  ASSERT_EQ(g.node_count(), 28);
  EXPECT_GE(exact_chromatic_number(g).chi, 3);
  EXPECT_EQ(exact_chromatic_number(petersen_graph()).chi, 3);
  EXPECT_THROW(exact_chromatic_number(Graph{}), Error);
}

// Every labelled graph on at most 5 nodes.
TEST(Chromatic, ExhaustiveSmallGraphs) {
  for (NodeId n = 1; n <= 5; ++n) {
    std::vector<Edge> pairs;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<Edge> e;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask >> i & 1) e.push_back(pairs[i]);
      Graph g = build_graph(n, e);
      auto cert = exact_chromatic_number(g);
      ASSERT_EQ(cert.chi, oracle::chromatic_number(g)) << graph_to_text(g);
      ASSERT_TRUE(verify_certificate(g, cert));
    }
  }
}

TEST(Chromatic, RandomGraphsUpToEightNodes) {
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    NodeId n = 6 + static_cast<NodeId>(rng.below(3));
    Graph g = oracle::random_graph(n, 0.2 + 0.6 * rng.uniform01(), rng);
    auto cert = exact_chromatic_number(g);
    ASSERT_EQ(cert.chi, oracle::chromatic_number(g)) << graph_to_text(g);
    EXPECT_TRUE(is_clique(g, cert.clique));
    EXPECT_LE(cert.clique.size(), static_cast<std::size_t>(cert.chi));
    EXPECT_TRUE(is_proper_coloring(g, cert.coloring).proper);
    EXPECT_EQ(*std::max_element(cert.coloring.begin(), cert.coloring.end()), cert.chi);
  }
}

TEST(Chromatic, BudgetExceededCarriesBracket) {
  // Mycielski-style graphs are hard for tiny budgets; the Groetzsch graph has chi 4.
  Graph g = build_graph(11, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {5, 1}, {5, 4}, {6, 0}, {6, 2},
                             {7, 1}, {7, 3}, {8, 2}, {8, 4}, {9, 3}, {9, 0}, {10, 5}, {10, 6},
                             {10, 7}, {10, 8}, {10, 9}});
  EXPECT_EQ(exact_chromatic_number(g).chi, 4);
  SolverOptions opt;
  opt.budget = 1;
  opt.probe = 1;
  opt.dp_state_limit = 1;
  auto b = chromatic_bracket(g, opt);
  EXPECT_LE(b.lower, 4);
  EXPECT_GE(b.upper, 4);
}

TEST(LocalChromatic, Examples) {
  EXPECT_EQ(local_chromatic_number(cycle_graph(7), 1).value, 2);
  EXPECT_EQ(local_chromatic_number(rjoin_gadget(2, 3, 2), 3).value, 2);
  EXPECT_EQ(local_chromatic_number(kb_gadget(9, 9), 2).value, 2);
}

TEST(LocalChromatic, MonotoneAndBoundedByChi) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    Graph g = oracle::random_connected(14, 0.08, rng);
    int chi = exact_chromatic_number(g).chi;
    int prev = 0;
    for (int r = 0; r <= 4; ++r) {
      int cur = local_chromatic_number(g, r).value;
      EXPECT_LE(prev, cur);
      EXPECT_LE(cur, chi);
      prev = cur;
    }
  }
}

TEST(Girth, Examples) {
  EXPECT_EQ(girth(cycle_graph(6)), 6);
  EXPECT_EQ(girth(path_graph(10)), std::nullopt);
  EXPECT_EQ(girth(grid_graph(1, 1)), std::nullopt);
  EXPECT_EQ(girth(kb_gadget(5, 5)), 4);
  EXPECT_EQ(girth(petersen_graph()), 5);
}

TEST(Girth, ThreeIffTriangle) {
  Rng rng(50);
  for (int t = 0; t < 60; ++t) {
    NodeId n = 5 + static_cast<NodeId>(rng.below(46));
    Graph g = oracle::random_graph(n, 2.0 / n, rng);
    EXPECT_EQ(girth(g) == 3, has_triangle(g));
  }
}

TEST(VerifyClustering, Examples) {
  Clustering whole;
  whole.clusters = {NodeSet::range(3)};
  EXPECT_TRUE(verify_clustering(complete_graph(3), whole, 0.0, 1).ok);

  Clustering touching;
  touching.clusters = {ns({0}), ns({1})};
  auto rep = verify_clustering(path_graph(2), touching, 0.0, 0);
  EXPECT_FALSE(rep.ok);
  ASSERT_FALSE(rep.violations.empty());
  EXPECT_EQ(rep.violations[0].substr(0, 3), "(a)");

  Clustering sparse;
  sparse.clusters = {ns({0})};
  sparse.unclustered = ns({1, 2, 3});
  EXPECT_FALSE(verify_clustering(edgeless_graph(4), sparse, 0.5, 0).ok);
  EXPECT_TRUE(verify_clustering(edgeless_graph(4), sparse, 0.75, 0).ok);

  Clustering wide;
  wide.clusters = {ns({0, 4})};
  wide.unclustered = ns({1, 2, 3});
  EXPECT_FALSE(verify_clustering(path_graph(5), wide, 1.0, 3).ok);
  EXPECT_TRUE(verify_clustering(path_graph(5), wide, 1.0, 4).ok);
}

TEST(VerifyDecomposition, Examples) {
  Graph c5 = cycle_graph(5);
  NetworkDecomposition singles;
  singles.alpha = 3;
  for (NodeId v = 0; v < 5; ++v) singles.clusters.push_back(ns({v}));
  singles.colors = {1, 2, 1, 2, 3};
  EXPECT_TRUE(verify_decomposition(c5, singles, 3, 0).ok);
  singles.colors = {1, 2, 1, 2, 1};
  EXPECT_FALSE(verify_decomposition(c5, singles, 3, 0).ok);

  NetworkDecomposition whole;
  whole.alpha = 1;
  whole.clusters = {NodeSet::range(5)};
  whole.colors = {1};
  EXPECT_TRUE(verify_decomposition(c5, whole, 1, 2).ok);
  EXPECT_FALSE(verify_decomposition(c5, whole, 1, 1).ok);

  NetworkDecomposition partial = whole;
  partial.clusters = {ns({0, 1, 2})};
  EXPECT_FALSE(verify_decomposition(c5, partial, 1, 5).ok);
}

TEST(LayeredColor, TotalOrderAndRemap) {
  EXPECT_LT(LayeredColor::hidden(), LayeredColor::pair(1, 1));
  EXPECT_LT(LayeredColor::pair(1, 1), LayeredColor::pair(2, 1));
  EXPECT_LT(LayeredColor::pair(3, 1), LayeredColor::pair(1, 2));
  EXPECT_EQ(remap_color(LayeredColor::hidden(), 2), 1);
  EXPECT_EQ(remap_color(LayeredColor::pair(1, 1), 2), 2);
  EXPECT_EQ(remap_color(LayeredColor::pair(3, 2), 3), 7);
}
