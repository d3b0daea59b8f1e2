#include <gtest/gtest.h>

#include "lcol/adversary.hpp"
#include "lcol/gadgets.hpp"
#include "lcol/generators.hpp"
#include "oracles.hpp"

using namespace lcol;

namespace {

std::string first_violation(const CoverReport& r) { return r.violations.empty() ? "" : r.violations.front(); }

}  // namespace

TEST(RJoinGadget, SizesFollowTheClosedForm) {
  EXPECT_EQ(rjoin_gadget(2, 3, 2).node_count(), 28);
  EXPECT_EQ(rjoin_gadget(3, 3, 2).node_count(), 60);
  EXPECT_EQ(rjoin_gadget(2, 3, 1), complete_graph(2));
  for (int chi = 2; chi <= 3; ++chi)
    for (int r = 2; r <= 4; ++r)
      for (int k = 1; k <= 3; ++k) {
        std::int64_t want = 1;
        for (int i = 0; i < k; ++i) want *= 2 * r * chi + 1;
        want = (want - 1) / (2 * r);
        EXPECT_EQ(rjoin_gadget(chi, r, k).node_count(), want);
        EXPECT_EQ(rjoin_gadget_size(chi, r, k), want);
      }
  EXPECT_THROW(rjoin_gadget(3, 3, 9), Error);  // above the size limit
}

TEST(RJoinCover, CertificatesPass) {
  for (int k : {2, 3}) {
    SubgraphCover c = rjoin_cover(2, 3, k);
    EXPECT_EQ(c.T, 2);
    EXPECT_EQ(c.elements.size(), static_cast<std::size_t>(k));
    auto rep = verify_cover(rjoin_gadget(2, 3, k), c, 2);
    EXPECT_TRUE(rep.ok) << first_violation(rep);
    for (const char* clause : {"union", "edges", "one_ball", "local_chi", "connected", "witness"})
      EXPECT_TRUE(rep.clauses.at(clause)) << clause;
  }
  EXPECT_THROW(rjoin_cover(2, 2, 2), Error);
}

TEST(KbGadget, Examples) {
  EXPECT_EQ(kb_gadget(3, 3).node_count(), 9);
  Graph g = kb_gadget(5, 5);
  EXPECT_EQ(g.node_count(), 25);
  EXPECT_EQ(g.edge_count(), 50u);
  for (NodeId v = 0; v < 25; ++v) EXPECT_EQ(g.degree(v), 4);
  EXPECT_EQ(girth(g), 4);
}

TEST(KbParity, Examples) {
  auto p5 = kb_parity(5, 5);
  EXPECT_TRUE(p5.odd);
  ASSERT_EQ(p5.breaking.size(), 5u);
  // {(i,0),(i+1,0)} for i = 0..4, with (5,0) identified with (0,0).
  for (int i = 0; i < 5; ++i) {
    NodeId u = kb_id(5, i, 0), v = kb_id(5, (i + 1) % 5, 0);
    Edge e{std::min(u, v), std::max(u, v)};
    EXPECT_NE(std::find(p5.breaking.begin(), p5.breaking.end(), e), p5.breaking.end()) << i;
  }
  EXPECT_FALSE(kb_parity(4, 4).odd);
  EXPECT_TRUE(kb_parity(3, 3).odd);
}

TEST(KbParity, EqualsWidthParityAndBreakingEdgesAreEdges) {
  for (int W = 2; W <= 9; ++W)
    for (int H = 2; H <= 9; ++H) {
      auto p = kb_parity(W, H);
      EXPECT_EQ(p.odd, W % 2 == 1) << W << "x" << H;
      Graph g = kb_gadget(W, H);
      for (auto [u, v] : p.breaking) EXPECT_TRUE(g.has_edge(u, v));
    }
}

TEST(KbCover, Size9) {
  SubgraphCover c = kb_cover(9, 9);
  EXPECT_EQ(c.T, 1);
  EXPECT_EQ(c.elements.size(), 4u);
  auto rep = verify_cover(kb_gadget(9, 9), c, 2);
  EXPECT_TRUE(rep.ok) << first_violation(rep);
}

TEST(KbCover, Size13) {
  SubgraphCover c = kb_cover(13, 13);
  EXPECT_EQ(c.T, 2);
  auto rep = verify_cover(kb_gadget(13, 13), c, 2);
  EXPECT_TRUE(rep.ok) << first_violation(rep);
}

// Sizes where the neighbourhood stays a planar patch.
TEST(KbCover, Sizes7And11) {
  for (int w : {7, 11}) {
    auto rep = verify_cover(kb_gadget(w, w), kb_cover(w, w), 2);
    EXPECT_TRUE(rep.ok) << w << ": " << first_violation(rep);
  }
}

TEST(KbCover, BadParams) {
  try {
    kb_cover(4, 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadParams);
  }
  EXPECT_THROW(kb_cover(3, 3), Error);
}

TEST(VerifyCover, WholeGraphAndDeletedNode) {
  Graph g = petersen_graph();
  SubgraphCover whole;
  whole.elements = {NodeSet::range(10)};
  whole.T = 0;
  EXPECT_TRUE(verify_cover(g, whole, 3).ok);

  SubgraphCover holed = whole;
  holed.elements = {NodeSet::from_sorted({1, 2, 3, 4, 5, 6, 7, 8, 9})};
  auto rep = verify_cover(g, holed, 3);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.clauses.at("union"));
}

TEST(CheatingInstance, KbGridSingleCopy) {
  GadgetSpec s;
  s.kind = GadgetKind::KB;
  s.W = s.H = 9;
  CheatingInstance inst = assemble_cheating_instance(s, {2}, std::nullopt, GridTarget{9, 9});
  EXPECT_EQ(inst.family, "grid");
  EXPECT_TRUE(inst.graph == grid_graph(9, 9));
  EXPECT_EQ(exact_chromatic_number(inst.graph).chi, 2);
  EXPECT_TRUE(inst.views_match);
  EXPECT_TRUE(inst.neighborhoods_isomorphic);
}

TEST(CheatingInstance, RJoinTwoCopies) {
  GadgetSpec s;
  s.kind = GadgetKind::RJoin;
  s.chi = 2;
  s.r = 3;
  s.k = 2;
  Graph gadget = make_gadget(s);
  SubgraphCover cover = make_cover(s);
  std::size_t patch = 0;
  for (const auto& el : cover.elements) patch = std::max(patch, neighborhood_of_set(gadget, el, cover.T).size());
  const NodeId n = static_cast<NodeId>(2 * patch + 10);
  CheatingInstance inst = assemble_cheating_instance(s, {1, 2}, n);
  EXPECT_EQ(inst.graph.node_count(), n);
  EXPECT_TRUE(is_connected(inst.graph));
  EXPECT_EQ(exact_chromatic_number(inst.graph).chi, 2);
  EXPECT_TRUE(inst.neighborhoods_isomorphic);
  for (const auto& p : inst.patches) {
    auto a = induced_subgraph(inst.graph, p.neighborhood).graph;
    auto b = induced_subgraph(gadget, neighborhood_of_set(gadget, cover.elements[p.index - 1], cover.T)).graph;
    EXPECT_TRUE(is_isomorphic(a, b).isomorphic);
  }
}

TEST(CheatingInstance, NoCopiesDoesNotFit) {
  GadgetSpec s;
  try {
    assemble_cheating_instance(s, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DoesNotFit);
  }
  s.kind = GadgetKind::RJoin;
  EXPECT_THROW(assemble_cheating_instance(s, {1}, NodeId{3}), Error);  // below the patch size
}
