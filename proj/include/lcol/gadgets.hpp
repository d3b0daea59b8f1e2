#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcol/analysis.hpp"
#include "lcol/generators.hpp"
#include "lcol/graph.hpp"
#include "lcol/io.hpp"
#include "lcol/isomorphism.hpp"

namespace lcol {

inline constexpr std::int64_t kGadgetSizeLimit = 1'000'000;

// ---------------------------------------------------------------------------
// r-join gadgets

inline std::int64_t rjoin_gadget_size(int chi, int r, int k) {
  // ((2 r chi + 1)^k - 1) / (2r), evaluated through the recurrence to avoid overflow.
  std::int64_t n = chi;
  for (int level = 2; level <= k; ++level) {
    n = n * (2LL * r * chi + 1) + chi;
    if (n > 4 * kGadgetSizeLimit) return n;
  }
  return n;
}

inline Graph labelled_clique(int chi, int level) {
  std::vector<Edge> e;
  std::vector<std::string> labels;
  for (int b = 0; b < chi; ++b) {
    labels.push_back("K" + std::to_string(level) + ":" + std::to_string(b));
    for (int c = b + 1; c < chi; ++c) e.emplace_back(b, c);
  }
  return build_graph(chi, std::move(e), std::move(labels));
}

// G_1 = K_chi and G_k = G_{k-1} joined to a fresh K_chi by 2r layers.
inline Graph rjoin_gadget(int chi, int r, int k) {
  if (chi < 2 || r < 2 || k < 1) throw Error(ErrorKind::BadParams, "rjoin gadget needs chi >= 2, r >= 2, k >= 1");
  if (rjoin_gadget_size(chi, r, k) > kGadgetSizeLimit)
    throw Error(ErrorKind::SizeLimit, "rjoin gadget would exceed " + std::to_string(kGadgetSizeLimit) + " nodes");
  Graph g = labelled_clique(chi, 1);
  for (int level = 2; level <= k; ++level) g = r_join(g, labelled_clique(chi, level), 2 * r);
  return g;
}

// ---------------------------------------------------------------------------
// Klein-bottle quadrangulations

// Node (i, j), 0 <= i < W, 0 <= j < H, has id j * W + i.
inline NodeId kb_id(int W, int i, int j) { return j * W + i; }

// Maps a point of the (W+1) x (H+1) grid to its class representative:
// (i, H) ~ (W - i, 0) and (W, j) ~ (0, j).
inline std::pair<int, int> kb_representative(int W, int H, int i, int j) {
  if (j == H) {
    i = W - i;
    j = 0;
  }
  if (i == W) i = 0;
  return {i, j};
}

inline Graph kb_gadget(int W, int H) {
  if (W < 2 || H < 2) throw Error(ErrorKind::BadParams, "kb gadget needs W, H >= 2");
  std::vector<Edge> e;
  auto id = [&](int i, int j) {
    auto [a, b] = kb_representative(W, H, i, j);
    return kb_id(W, a, b);
  };
  for (int j = 0; j <= H; ++j)
    for (int i = 0; i <= W; ++i) {
      if (i < W) e.emplace_back(id(i, j), id(i + 1, j));
      if (j < H) e.emplace_back(id(i, j), id(i, j + 1));
    }
  std::vector<std::string> labels;
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W; ++i) labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  return build_graph(W * H, std::move(e), std::move(labels));
}

// Node order with a narrow frontier: rows when W <= H, otherwise column 0
// followed by the columns i and W - i interleaved, which the twist joins
// into rings.
inline std::vector<NodeId> kb_sweep_order(int W, int H) {
  std::vector<NodeId> order;
  if (W <= H) {
    for (int j = 0; j < H; ++j)
      for (int i = 0; i < W; ++i) order.push_back(kb_id(W, i, j));
    return order;
  }
  for (int j = 0; j < H; ++j) order.push_back(kb_id(W, 0, j));
  for (int i = 1; 2 * i <= W; ++i)
    for (int j = 0; j < H; ++j) {
      order.push_back(kb_id(W, i, j));
      if (W - i != i) order.push_back(kb_id(W, W - i, H - 1 - j));
    }
  return order;
}

// Breaking-edge count of a uniform clockwise orientation of the faces.
struct KbParity {
  bool odd = false;
  std::vector<Edge> breaking;  // quotient edges, (min id, max id)
};

inline KbParity kb_parity(int W, int H) {
  if (W < 2 || H < 2) throw Error(ErrorKind::BadParams, "kb parity needs W, H >= 2");
  using Pt = std::pair<int, int>;
  using Arc = std::pair<Pt, Pt>;
  // Boundary arcs are rewritten into the coordinates of their partner side.
  auto canonical = [&](Arc a) {
    auto& [p, q] = a;
    if (p.second == H && q.second == H) {
      p = {W - p.first, 0};
      q = {W - q.first, 0};
    } else if (p.first == W && q.first == W) {
      p = {0, p.second};
      q = {0, q.second};
    }
    return a;
  };
  // Undirected key -> traversal directions seen so far.
  std::map<std::pair<Pt, Pt>, std::vector<Arc>> seen;
  for (int j = 0; j < H; ++j)
    for (int i = 0; i < W; ++i) {
      const Pt c[4] = {{i, j}, {i, j + 1}, {i + 1, j + 1}, {i + 1, j}};  // clockwise with y up
      for (int t = 0; t < 4; ++t) {
        Arc a = canonical({c[t], c[(t + 1) % 4]});
        auto key = std::minmax(a.first, a.second);
        seen[{key.first, key.second}].push_back(a);
      }
    }
  KbParity out;
  for (const auto& [key, arcs] : seen) {
    if (arcs.size() != 2) throw Error(ErrorKind::CertificateFailed, "face side not shared by exactly two faces");
    if (arcs[0] != arcs[1]) continue;
    auto [a, b] = kb_representative(W, H, key.first.first, key.first.second);
    auto [c, d] = kb_representative(W, H, key.second.first, key.second.second);
    const NodeId u = kb_id(W, a, b), v = kb_id(W, c, d);
    out.breaking.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(out.breaking.begin(), out.breaking.end());
  out.odd = out.breaking.size() % 2 == 1;
  return out;
}

// ---------------------------------------------------------------------------
// Subgraph covers

struct CoverCertificate {
  int local_chi = 0;          // chromatic number of host[N_T(element)], or a lower bound
  bool local_chi_exact = true;
  bool connected = false;     // element induces a connected subgraph
  NodeId witness = -1;        // max-id node at distance exactly T, -1 if none
  int neighborhood_size = 0;  // |N_T(element)|
  std::optional<bool> grid_patch;  // N_T(element) isomorphic to the lattice patch
};

struct SubgraphCover {
  std::string family;  // "rjoin", "kb" or "custom"
  std::string host_sha256;
  std::vector<NodeSet> elements;
  int T = 0;
  std::vector<CoverCertificate> certificates;
  std::optional<std::pair<int, int>> patch;  // core grid dimensions of each element, when grid-like
};

// Lattice points within L1 distance T of the a x b rectangle; `core` marks
// the rectangle itself. Coordinates are stored in `coords`.
struct LatticePatch {
  Graph graph;
  std::vector<std::pair<int, int>> coords;
  std::vector<int> core;
};

inline LatticePatch lattice_patch(int a, int b, int T) {
  LatticePatch out;
  std::map<std::pair<int, int>, NodeId> id;
  for (int y = -T; y < b + T; ++y)
    for (int x = -T; x < a + T; ++x) {
      int dx = x < 0 ? -x : std::max(0, x - (a - 1));
      int dy = y < 0 ? -y : std::max(0, y - (b - 1));
      if (dx + dy > T) continue;
      id[{x, y}] = static_cast<NodeId>(out.coords.size());
      out.coords.emplace_back(x, y);
      out.core.push_back(dx + dy == 0 ? 1 : 0);
    }
  std::vector<Edge> e;
  for (auto [p, v] : id) {
    if (auto it = id.find({p.first + 1, p.second}); it != id.end()) e.emplace_back(v, it->second);
    if (auto it = id.find({p.first, p.second + 1}); it != id.end()) e.emplace_back(v, it->second);
  }
  out.graph = build_graph(static_cast<NodeId>(out.coords.size()), std::move(e));
  return out;
}

namespace detail {

// Isomorphism from host[N_T(element)] onto the lattice patch that maps the
// element onto the core.
inline std::optional<std::vector<NodeId>> match_patch(const Graph& host, const NodeSet& element, int T,
                                                      const LatticePatch& ref, NodeSet* hood_out = nullptr) {
  NodeSet hood = neighborhood_of_set(host, element, T);
  if (hood_out) *hood_out = hood;
  auto sub = induced_subgraph(host, hood);
  std::vector<int> colors(hood.size());
  for (std::size_t i = 0; i < hood.size(); ++i) colors[i] = element.contains(hood[i]) ? 1 : 0;
  auto r = is_isomorphic(sub.graph, ref.graph, colors, ref.core);
  if (!r.isomorphic) return std::nullopt;
  return r.mapping;
}

}  // namespace detail

inline CoverCertificate certify_element(const Graph& host, const NodeSet& element, int T,
                                        std::optional<std::pair<int, int>> patch = std::nullopt) {
  CoverCertificate c;
  NodeSet hood = neighborhood_of_set(host, element, T);
  c.neighborhood_size = static_cast<int>(hood.size());
  auto bracket = chromatic_bracket(induced_subgraph(host, hood).graph);
  c.local_chi = bracket.lower;
  c.local_chi_exact = bracket.exact();
  c.connected = !element.empty() && is_connected(induced_subgraph(host, element).graph);
  Bfs bfs(host);
  for (NodeId v : bfs.run(element.ids(), T))
    if (bfs.dist(v) == T) c.witness = std::max(c.witness, v);
  if (patch) {
    auto ref = lattice_patch(patch->first, patch->second, T);
    c.grid_patch = detail::match_patch(host, element, T, ref).has_value();
  }
  return c;
}

inline void certify_cover(const Graph& host, SubgraphCover& cover) {
  cover.host_sha256 = graph_sha256(host);
  cover.certificates.clear();
  for (const auto& el : cover.elements) cover.certificates.push_back(certify_element(host, el, cover.T, cover.patch));
}

struct CoverReport {
  bool ok = true;
  std::map<std::string, bool> clauses;
  std::vector<std::string> violations;

  void check(const std::string& clause, bool pass, const std::string& detail = "") {
    auto [it, fresh] = clauses.emplace(clause, pass);
    if (!fresh) it->second = it->second && pass;
    if (!pass) {
      ok = false;
      violations.push_back(detail.empty() ? clause : clause + ": " + detail);
    }
  }
};

// Re-derives every certificate from scratch and compares with the stored ones.
inline CoverReport verify_cover(const Graph& host, const SubgraphCover& cover, int expected_local_chi) {
  CoverReport rep;
  const NodeId n = host.node_count();
  std::vector<std::vector<int>> owners(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < cover.elements.size(); ++i)
    for (NodeId v : cover.elements[i]) {
      if (v < 0 || v >= n) throw Error(ErrorKind::OutOfRange, "cover element node out of range");
      owners[v].push_back(static_cast<int>(i));
    }
  auto inside = [&](std::size_t i, NodeId v) { return cover.elements[i].contains(v); };

  NodeId uncovered = -1;
  for (NodeId v = 0; v < n && uncovered < 0; ++v)
    if (owners[v].empty()) uncovered = v;
  rep.check("union", uncovered < 0, uncovered < 0 ? "" : "node " + std::to_string(uncovered) + " uncovered");

  std::optional<Edge> lost;
  for (auto [u, v] : host.edges()) {
    bool ok = std::any_of(owners[u].begin(), owners[u].end(), [&](int i) { return inside(i, v); });
    if (!ok) {
      lost = Edge{u, v};
      break;
    }
  }
  rep.check("edges", !lost, lost ? "edge " + std::to_string(lost->first) + "-" + std::to_string(lost->second) : "");

  NodeId open_ball = -1;
  for (NodeId v = 0; v < n && open_ball < 0; ++v) {
    auto nb = host.neighbors(v);
    bool ok = std::any_of(owners[v].begin(), owners[v].end(), [&](int i) {
      return std::all_of(nb.begin(), nb.end(), [&](NodeId w) { return inside(i, w); });
    });
    if (!ok) open_ball = v;
  }
  rep.check("one_ball", open_ball < 0, open_ball < 0 ? "" : "ball of node " + std::to_string(open_ball));

  if (!cover.host_sha256.empty()) rep.check("host", cover.host_sha256 == graph_sha256(host));
  const bool have_stored = cover.certificates.size() == cover.elements.size();
  if (!cover.certificates.empty()) rep.check("stored", have_stored, "certificate count mismatch");

  for (std::size_t i = 0; i < cover.elements.size(); ++i) {
    const std::string tag = "element " + std::to_string(i + 1);
    auto c = certify_element(host, cover.elements[i], cover.T, cover.patch);
    rep.check("local_chi", c.local_chi_exact && c.local_chi == expected_local_chi,
              tag + " has local chromatic number " + (c.local_chi_exact ? "" : ">= ") + std::to_string(c.local_chi));
    rep.check("connected", c.connected, tag);
    rep.check("witness", c.witness >= 0, tag + " has no node at distance T");
    if (cover.patch) rep.check("grid_patch", c.grid_patch.value_or(false), tag);
    if (have_stored) {
      const auto& s = cover.certificates[i];
      bool same = s.local_chi == c.local_chi && s.local_chi_exact == c.local_chi_exact &&
                  s.connected == c.connected && s.witness == c.witness &&
                  s.neighborhood_size == c.neighborhood_size && s.grid_patch == c.grid_patch;
      rep.check("stored", same, tag + " certificate differs from recomputation");
    }
  }
  return rep;
}

inline Json to_json(const CoverCertificate& c) {
  Json j{{"local_chi", c.local_chi},
         {"local_chi_exact", c.local_chi_exact},
         {"connected", c.connected},
         {"witness", c.witness},
         {"neighborhood_size", c.neighborhood_size}};
  if (c.grid_patch) j["grid_patch"] = *c.grid_patch;
  return j;
}

inline Json to_json(const SubgraphCover& c) {
  Json els = Json::array();
  for (const auto& e : c.elements) els.push_back(node_set_to_json(e));
  Json certs = Json::array();
  for (const auto& x : c.certificates) certs.push_back(to_json(x));
  Json j{{"schema", kSchemaVersion},
         {"family", c.family},
         {"host_sha256", c.host_sha256},
         {"elements", els},
         {"T", c.T},
         {"certificates", {{"elements", certs}}}};
  if (c.patch) j["patch"] = {c.patch->first, c.patch->second};
  return j;
}

inline Json to_json(const CoverReport& r) {
  return Json{{"ok", r.ok}, {"clauses", r.clauses}, {"violations", r.violations}};
}

// Cover of G_k by k elements; element i < k grows from the previous level's
// element i through the first T+2 layers, element k is the far end.
inline SubgraphCover rjoin_cover(int chi, int r, int k, bool certify = true) {
  if (r < 3) throw Error(ErrorKind::BadParams, "rjoin cover needs r >= 3");
  if (k < 2) throw Error(ErrorKind::BadParams, "rjoin cover needs k >= 2");
  Graph g = rjoin_gadget(chi, r, k);  // validates the remaining parameters
  const int T = 2 * r / 3;
  const int layers = 2 * r;
  Graph level = labelled_clique(chi, 1);
  std::vector<NodeSet> elements{NodeSet::range(chi)};
  for (int lv = 2; lv <= k; ++lv) {
    Graph next = r_join(level, labelled_clique(chi, lv), layers);
    const RJoinLayout L{level.node_count(), chi, layers};
    std::vector<NodeSet> grown;
    for (const auto& el : elements) {
      NodeSet reach = neighborhood_of_set(next, el, T + 2);
      std::vector<NodeId> ids(el.ids());
      for (NodeId a : el)
        for (NodeId b = 0; b < chi; ++b)
          for (int i = 1; i <= T + 2; ++i)
            if (NodeId v = L.layer_node(a, b, i); reach.contains(v)) ids.push_back(v);
      grown.push_back(NodeSet::from_unsorted(std::move(ids)));
    }
    std::vector<NodeId> last;
    for (NodeId a = 0; a < L.ng; ++a)
      for (NodeId b = 0; b < chi; ++b)
        for (int i = T + 1; i <= layers; ++i) last.push_back(L.layer_node(a, b, i));
    for (NodeId b = 0; b < chi; ++b) last.push_back(L.h_node(b));
    grown.push_back(NodeSet::from_unsorted(std::move(last)));
    elements = std::move(grown);
    level = std::move(next);
  }
  SubgraphCover cover;
  cover.family = "rjoin";
  cover.elements = std::move(elements);
  cover.T = T;
  if (certify) certify_cover(g, cover);
  return cover;
}

inline int kb_cover_radius(int W, int H) { return (std::min(W, H) - 5) / 4; }

// Four grid-like elements of the Klein-bottle gadget, each a
// ((W+5)/2) x ((H+5)/2) patch.
inline SubgraphCover kb_cover(int W, int H, bool certify = true) {
  if (W < 5 || H < 5 || W % 2 == 0 || H % 2 == 0)
    throw Error(ErrorKind::BadParams, "kb cover needs odd W, H >= 5");
  auto in = [](int v, int lo, int hi) { return lo <= v && v <= hi; };
  const int wl = (W + 1) / 2, wh = (W - 1) / 2, hl = (H + 1) / 2, hh = (H - 1) / 2;
  auto wide = [&](int i) { return in(i, 0, wl) || in(i, W - 1, W); };      // [0:(W+1)/2] u [W-1:W]
  auto narrow = [&](int i) { return in(i, 0, 1) || in(i, wh, W); };        // [0:1] u [(W-1)/2:W]
  std::vector<std::function<bool(int, int)>> rule{
      [&](int i, int j) { return (wide(i) && in(j, 0, hl)) || (narrow(i) && in(j, H - 1, H)); },
      [&](int i, int j) { return (narrow(i) && in(j, 0, hl)) || (wide(i) && in(j, H - 1, H)); },
      [&](int i, int j) { return (wide(i) && in(j, 0, 1)) || (narrow(i) && in(j, hh, H)); },
      [&](int i, int j) { return (narrow(i) && in(j, 0, 1)) || (wide(i) && in(j, hh, H)); },
  };
  SubgraphCover cover;
  cover.family = "kb";
  cover.T = kb_cover_radius(W, H);
  cover.patch = std::pair{(W + 5) / 2, (H + 5) / 2};
  for (const auto& pred : rule) {
    std::vector<NodeId> ids;
    for (int j = 0; j <= H; ++j)
      for (int i = 0; i <= W; ++i)
        if (pred(i, j)) {
          auto [a, b] = kb_representative(W, H, i, j);
          ids.push_back(kb_id(W, a, b));
        }
    cover.elements.push_back(NodeSet::from_unsorted(std::move(ids)));
  }
  if (certify) certify_cover(kb_gadget(W, H), cover);
  return cover;
}

// ---------------------------------------------------------------------------
// Cheating instances

struct EmbeddedPatch {
  int index = 0;                            // cover element, 1-based
  std::vector<std::pair<NodeId, NodeId>> map;  // gadget node -> instance node, over N_T(element)
  NodeSet element;                          // element nodes inside the instance
  NodeSet neighborhood;                     // N_T(element) inside the instance
};

struct CheatingInstance {
  Graph graph;
  std::vector<int> x;  // 1-based element indices
  std::vector<EmbeddedPatch> patches;
  std::string family;  // "chromatic" or "grid"
  int grid_w = 0, grid_h = 0;
  int T = 0;
  bool neighborhoods_isomorphic = true;  // each patch's N_T equals the gadget's, edge for edge
  bool views_match = true;               // each element node's radius-T ball equals the gadget's
};

namespace detail {

inline void check_index_vector(const SubgraphCover& cover, const std::vector<int>& x) {
  if (x.empty()) throw Error(ErrorKind::DoesNotFit, "need at least one copy");
  for (int i : x)
    if (i < 1 || i > static_cast<int>(cover.elements.size()))
      throw Error(ErrorKind::BadParams, "element index " + std::to_string(i) + " out of range");
}

// The instance's T-neighbourhood of each patch must be exactly the image of
// the gadget's T-neighbourhood, edge for edge.
inline bool patch_untouched(const Graph& gadget, const Graph& inst, const EmbeddedPatch& p, int T) {
  if (neighborhood_of_set(inst, p.element, T) != p.neighborhood) return false;
  std::map<NodeId, NodeId> fwd(p.map.begin(), p.map.end());
  std::size_t edges = 0;
  for (auto [g, h] : p.map)
    for (NodeId w : gadget.neighbors(g)) {
      auto it = fwd.find(w);
      if (it == fwd.end()) continue;
      if (!inst.has_edge(h, it->second)) return false;
      ++edges;
    }
  std::size_t inst_edges = 0;
  for (NodeId v : p.neighborhood)
    for (NodeId w : inst.neighbors(v)) inst_edges += p.neighborhood.contains(w);
  return edges == inst_edges;
}

// Weaker than patch_untouched: only the radius-T balls around element nodes,
// which is what a T-round algorithm at those nodes can observe.
inline bool views_match(const Graph& gadget, const Graph& inst, const EmbeddedPatch& p, int T) {
  std::map<NodeId, NodeId> fwd(p.map.begin(), p.map.end());
  Bfs gb(gadget), ib(inst);
  for (auto [g, h] : p.map) {
    if (!p.element.contains(h)) continue;
    std::vector<NodeId> image;
    for (NodeId v : gb.run_from(g, T)) {
      auto it = fwd.find(v);
      if (it == fwd.end()) return false;
      image.push_back(it->second);
    }
    NodeSet want = NodeSet::from_unsorted(image);
    if (NodeSet::from_unsorted(ib.run_from(h, T)) != want) return false;
    std::vector<NodeId> ball(gb.run_from(g, T));
    for (NodeId u : ball)
      for (NodeId w : ball)
        if (u < w && gadget.has_edge(u, w) != inst.has_edge(fwd[u], fwd[w])) return false;
  }
  return true;
}

}  // namespace detail

// Chromatic family: copies of the elements' T-neighbourhoods chained by single
// edges between distance-T witnesses, padded by a path to exactly n nodes.
inline CheatingInstance assemble_chromatic_instance(const Graph& gadget, const SubgraphCover& cover,
                                                   const std::vector<int>& x, NodeId n, int chi) {
  detail::check_index_vector(cover, x);
  const int T = cover.T;
  CheatingInstance out;
  out.family = "chromatic";
  out.x = x;
  out.T = T;
  std::vector<Edge> edges;
  NodeId next = 0;
  std::vector<NodeId> witness;
  for (int idx : x) {
    const NodeSet& el = cover.elements[static_cast<std::size_t>(idx - 1)];
    NodeSet hood = neighborhood_of_set(gadget, el, T);
    EmbeddedPatch p;
    p.index = idx;
    std::vector<NodeId> local(static_cast<std::size_t>(gadget.node_count()), -1);
    std::vector<NodeId> el_ids, hood_ids;
    for (NodeId v : hood) {
      local[v] = next;
      p.map.emplace_back(v, next);
      hood_ids.push_back(next);
      if (el.contains(v)) el_ids.push_back(next);
      ++next;
    }
    for (NodeId v : hood)
      for (NodeId w : gadget.neighbors(v))
        if (w > v && local[w] >= 0) edges.emplace_back(local[v], local[w]);
    Bfs bfs(gadget);
    NodeId wit = -1;
    for (NodeId v : bfs.run(el.ids(), T))
      if (bfs.dist(v) == T) wit = std::max(wit, v);
    if (wit < 0) throw Error(ErrorKind::CertificateFailed, "element has no node at distance T");
    witness.push_back(local[wit]);
    p.element = NodeSet::from_sorted(std::move(el_ids));
    p.neighborhood = NodeSet::from_sorted(std::move(hood_ids));
    out.patches.push_back(std::move(p));
  }
  if (n < next) throw Error(ErrorKind::DoesNotFit, "target size " + std::to_string(n) + " below " + std::to_string(next));
  for (std::size_t j = 0; j + 1 < witness.size(); ++j) edges.emplace_back(witness[j], witness[j + 1]);
  NodeId prev = witness.back();
  for (NodeId v = next; v < n; ++v) {
    edges.emplace_back(prev, v);
    prev = v;
  }
  out.graph = build_graph(n, std::move(edges));
  if (!is_connected(out.graph)) throw Error(ErrorKind::CertificateFailed, "assembled instance is disconnected");
  if (exact_chromatic_number(out.graph).chi != chi)
    throw Error(ErrorKind::CertificateFailed, "assembled instance is not " + std::to_string(chi) + "-chromatic");
  for (const auto& p : out.patches)
    if (!detail::patch_untouched(gadget, out.graph, p, T))
      throw Error(ErrorKind::CertificateFailed, "patch neighbourhood altered by assembly");
  return out;
}

// Bounding box of a lattice patch: core a x b grown by T on every side.
inline std::pair<int, int> patch_extent(std::pair<int, int> dims, int T) {
  return {dims.first + 2 * T, dims.second + 2 * T};
}

namespace detail {

// Unfolds N_T(element) of the Klein-bottle gadget into the plane. Each node
// carries a frame: +1 when plane x grows with i, -1 past an odd number of
// twist crossings. Nodes are placed layer by layer from the element outwards.
inline std::map<NodeId, std::pair<int, int>> kb_unfold(int W, int H, const Graph& gadget, const NodeSet& element,
                                                      int T) {
  auto step = [&](NodeId u, int frame, NodeId w, std::pair<int, int>& d, int& wf) {
    const int i = u % W, j = u / W;
    wf = frame;
    if (w == kb_id(W, (i + 1) % W, j)) d = {frame, 0};
    else if (w == kb_id(W, (i + W - 1) % W, j)) d = {-frame, 0};
    else if (j + 1 < H && w == kb_id(W, i, j + 1)) d = {0, 1};
    else if (j == H - 1 && w == kb_id(W, (W - i) % W, 0)) d = {0, 1}, wf = -frame;
    else if (j > 0 && w == kb_id(W, i, j - 1)) d = {0, -1};
    else if (j == 0 && w == kb_id(W, (W - i) % W, H - 1)) d = {0, -1}, wf = -frame;
    else throw Error(ErrorKind::CertificateFailed, "not a gadget edge");
  };
  std::map<NodeId, std::pair<int, int>> pos;
  std::map<NodeId, int> frame;
  Bfs dist(gadget);
  dist.run(element.ids(), T);
  // Within the element first, then one distance layer at a time.
  std::vector<NodeId> queue{element[0]};
  pos[element[0]] = {0, 0};
  frame[element[0]] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    NodeId u = queue[h];
    for (NodeId w : gadget.neighbors(u)) {
      if (!element.contains(w) || pos.count(w)) continue;
      std::pair<int, int> d;
      int wf;
      step(u, frame[u], w, d, wf);
      pos[w] = {pos[u].first + d.first, pos[u].second + d.second};
      frame[w] = wf;
      queue.push_back(w);
    }
  }
  for (int layer = 1; layer <= T; ++layer)
    for (NodeId w : dist.visited()) {
      if (dist.dist(w) != layer) continue;
      for (NodeId u : gadget.neighbors(w)) {
        if (dist.dist(u) != layer - 1 || !pos.count(u)) continue;
        std::pair<int, int> d;
        int wf;
        step(u, frame[u], w, d, wf);
        pos[w] = {pos[u].first + d.first, pos[u].second + d.second};
        frame[w] = wf;
        break;
      }
    }
  return pos;
}

}  // namespace detail

// Grid family: each patch of the W0 x H0 Klein-bottle gadget is unfolded and
// laid out in its own floor(W/N)-wide band of the W x H grid.
inline CheatingInstance assemble_grid_instance(int W0, int H0, const SubgraphCover& cover, const std::vector<int>& x,
                                               int W, int H) {
  detail::check_index_vector(cover, x);
  if (!cover.patch) throw Error(ErrorKind::BadParams, "cover elements are not grid patches");
  const Graph gadget = kb_gadget(W0, H0);
  const int T = cover.T;
  const int N = static_cast<int>(x.size());
  const int band = W / N;
  auto [pw, ph] = patch_extent(*cover.patch, T);
  // Either orientation of the patch may be used.
  const bool upright = pw <= band && ph <= H;
  const bool turned = ph <= band && pw <= H;
  if (!upright && !turned)
    throw Error(ErrorKind::DoesNotFit, "patch of extent " + std::to_string(pw) + "x" + std::to_string(ph) +
                                           " does not fit bands of " + std::to_string(band) + "x" + std::to_string(H));
  CheatingInstance out;
  out.family = "grid";
  out.x = x;
  out.T = T;
  out.grid_w = W;
  out.grid_h = H;
  out.graph = grid_graph(W, H);
  for (int j = 0; j < N; ++j) {
    const NodeSet& el = cover.elements[static_cast<std::size_t>(x[j] - 1)];
    auto pos = detail::kb_unfold(W0, H0, gadget, el, T);
    int x0 = std::numeric_limits<int>::max(), y0 = x0, x1 = std::numeric_limits<int>::min(), y1 = x1;
    for (auto& [v, p] : pos) {
      x0 = std::min(x0, p.first), x1 = std::max(x1, p.first);
      y0 = std::min(y0, p.second), y1 = std::max(y1, p.second);
    }
    const bool fits = upright ? (x1 - x0 < band && y1 - y0 < H) : (y1 - y0 < band && x1 - x0 < H);
    if (!fits) throw Error(ErrorKind::CertificateFailed, "unfolded patch exceeds its declared extent");
    EmbeddedPatch p;
    p.index = x[j];
    std::vector<NodeId> el_ids, hood_ids;
    for (auto& [v, q] : pos) {
      int gx = q.first - x0, gy = q.second - y0;
      if (!upright) std::swap(gx, gy);
      NodeId img = gy * W + gx + j * band;
      p.map.emplace_back(v, img);
      hood_ids.push_back(img);
      if (el.contains(v)) el_ids.push_back(img);
    }
    p.element = NodeSet::from_unsorted(std::move(el_ids));
    p.neighborhood = NodeSet::from_unsorted(std::move(hood_ids));
    if (p.neighborhood.size() != pos.size()) throw Error(ErrorKind::CertificateFailed, "unfolding is not injective");
    // A wrapped gadget neighbourhood cannot be a lattice patch; the instance is
    // still usable as long as every element node sees the same ball.
    out.neighborhoods_isomorphic = out.neighborhoods_isomorphic && detail::patch_untouched(gadget, out.graph, p, T);
    if (!detail::views_match(gadget, out.graph, p, T))
      throw Error(ErrorKind::CertificateFailed, "embedded patch changes a radius-T view");
    out.patches.push_back(std::move(p));
  }
  return out;
}

inline Json to_json(const CheatingInstance& c) {
  Json patches = Json::array();
  for (const auto& p : c.patches)
    patches.push_back({{"index", p.index},
                       {"element", node_set_to_json(p.element)},
                       {"neighborhood", node_set_to_json(p.neighborhood)}});
  Json j{{"schema", kSchemaVersion}, {"family", c.family}, {"n", c.graph.node_count()}, {"m", c.graph.edge_count()},
         {"x", c.x},           {"T", c.T},           {"patches", patches},
         {"neighborhoods_isomorphic", c.neighborhoods_isomorphic}, {"views_match", c.views_match}};
  if (c.family == "grid") j["grid"] = {c.grid_w, c.grid_h};
  return j;
}

}  // namespace lcol
