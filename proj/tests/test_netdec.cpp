#include <gtest/gtest.h>

#include "lcol/analysis.hpp"
#include "lcol/generators.hpp"
#include "lcol/netdec.hpp"
#include "oracles.hpp"

using namespace lcol;

TEST(NetDec, AlphaOneIsConnectedComponents) {
  std::vector<Graph> parts{path_graph(4), cycle_graph(5), complete_graph(1)};
  Graph g = disjoint_union(parts).graph;
  auto D = network_decomposition(g, 1, BaseKind::Rand, 3);
  ASSERT_EQ(D.clusters.size(), 3u);
  for (int c : D.colors) EXPECT_EQ(c, 1);
  EXPECT_EQ(D.clusters[0], NodeSet::from_sorted({0, 1, 2, 3}));
  EXPECT_EQ(D.d, 3);
}

TEST(NetDec, Grid16Det) {
  Graph g = grid_graph(16, 16);
  auto D = network_decomposition(g, 2, BaseKind::Det);
  EXPECT_TRUE(verify_decomposition(g, D, 2, D.d).ok);
  const double eps = netdec_eps(256, 2, default_g_estimate(256));
  std::size_t leftover = 0;
  for (std::size_t i = 0; i < D.clusters.size(); ++i)
    if (D.colors[i] == 2) leftover += D.clusters[i].size();
  EXPECT_LE(static_cast<double>(leftover), eps * 256 + 1e-9);
}

TEST(NetDec, EdgelessAnyAlpha) {
  Graph g = edgeless_graph(7);
  for (int alpha = 1; alpha <= 3; ++alpha) {
    auto D = network_decomposition(g, alpha, BaseKind::Rand, 1);
    EXPECT_EQ(D.clusters.size(), 7u);
    EXPECT_TRUE(verify_decomposition(g, D, alpha, 0).ok);
  }
}

TEST(NetDec, ValidOnRandomGraphsBothBases) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    Graph g = random_bipartite(300, 4.0 / 300, 40 + s);
    for (int alpha : {2, 3})
      for (BaseKind b : {BaseKind::Det, BaseKind::Rand}) {
        auto D = network_decomposition(g, alpha, b, s);
        auto rep = verify_decomposition(g, D, alpha, D.d);
        EXPECT_TRUE(rep.ok) << to_string(b) << " alpha=" << alpha;
        // Colour classes never touch themselves across clusters.
        std::vector<int> owner(300, -1);
        for (std::size_t i = 0; i < D.clusters.size(); ++i)
          for (NodeId v : D.clusters[i]) owner[v] = static_cast<int>(i);
        for (auto [u, v] : g.edges())
          if (owner[u] != owner[v]) EXPECT_NE(D.colors[owner[u]], D.colors[owner[v]]);
      }
  }
}

TEST(NetDec, EpsFormula) {
  EXPECT_EQ(default_g_estimate(1), 1);
  EXPECT_EQ(default_g_estimate(256), 8);
  EXPECT_DOUBLE_EQ(netdec_eps(256, 2, 8), std::sqrt(8.0 / 256));
  EXPECT_DOUBLE_EQ(netdec_eps(4, 1, 8), 1.0);
  EXPECT_THROW(network_decomposition(path_graph(3), 0), Error);
}
