#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lcol/graph.hpp"
#include "lcol/io.hpp"
#include "lcol/partition.hpp"
#include "lcol/rng.hpp"

namespace lcol {

// ---------------------------------------------------------------------------
// Colours

// Layered palette colour: Hidden, or a pair (a, b) with cluster colour a and
// palette index b >= 1. The total order is Hidden < (1,1) < (2,1) < ... <
// (alpha,1) < (1,2) < ..., i.e. lexicographic in (b, a).
struct LayeredColor {
  int a = 0;
  int b = 0;  // b == 0 encodes Hidden

  static constexpr LayeredColor hidden() { return {}; }
  static constexpr LayeredColor pair(int a, int b) { return {a, b}; }
  constexpr bool is_hidden() const { return b == 0; }

  friend constexpr bool operator==(const LayeredColor&, const LayeredColor&) = default;
  friend constexpr std::strong_ordering operator<=>(const LayeredColor& x, const LayeredColor& y) {
    if (auto c = x.b <=> y.b; c != 0) return c;
    return x.a <=> y.a;
  }
};

// Hidden -> 1, (a, b) -> alpha (b - 1) + a + 1.
constexpr int remap_color(LayeredColor c, int alpha) {
  return c.is_hidden() ? 1 : alpha * (c.b - 1) + c.a + 1;
}

using Coloring = std::vector<int>;
using LayeredColoring = std::vector<LayeredColor>;

struct PropernessReport {
  bool proper = true;
  std::optional<Edge> violation;  // first monochromatic edge in edge order
};

template <class C>
PropernessReport is_proper_coloring(const Graph& g, const std::vector<C>& col) {
  if (col.size() != static_cast<std::size_t>(g.node_count()))
    throw Error(ErrorKind::OutOfRange, "colouring size does not match node count");
  for (auto [u, v] : g.edges())
    if (col[u] == col[v]) return {false, Edge{u, v}};
  return {};
}

// ---------------------------------------------------------------------------
// Exact chromatic number

struct ChromaticCertificate {
  std::string graph_sha256;
  int chi = 0;
  std::vector<NodeId> clique;  // lower-bound witness
  Coloring coloring;           // upper-bound witness, values 1..chi
  std::string lower_proof;     // how optimality was established
  std::uint64_t expansions = 0;
};

inline Json to_json(const ChromaticCertificate& c) {
  return Json{{"schema", kSchemaVersion}, {"graph_sha256", c.graph_sha256}, {"chi", c.chi},
              {"clique", c.clique},       {"coloring", c.coloring},         {"lower_proof", c.lower_proof}};
}

inline bool is_clique(const Graph& g, const std::vector<NodeId>& nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (!g.has_edge(nodes[i], nodes[j])) return false;
  return true;
}

// Independent re-check of a certificate's witnesses.
inline bool verify_certificate(const Graph& g, const ChromaticCertificate& c) {
  if (c.graph_sha256 != graph_sha256(g)) return false;
  if (!is_clique(g, c.clique) || static_cast<int>(c.clique.size()) > c.chi) return false;
  if (c.coloring.size() != static_cast<std::size_t>(g.node_count())) return false;
  for (int x : c.coloring)
    if (x < 1 || x > c.chi) return false;
  return is_proper_coloring(g, c.coloring).proper;
}

inline constexpr std::uint64_t kDefaultSolverBudget = 10'000'000;

namespace detail {

inline std::vector<NodeId> greedy_clique(const Graph& g) {
  const NodeId n = g.node_count();
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  std::vector<NodeId> best;
  std::vector<char> in_cand(static_cast<std::size_t>(n), 0);
  for (NodeId v : order) {
    if (g.degree(v) + 1 <= static_cast<NodeId>(best.size())) break;
    std::vector<NodeId> clique{v};
    std::vector<NodeId> cand(g.neighbors(v).begin(), g.neighbors(v).end());
    while (!cand.empty()) {
      for (NodeId c : cand) in_cand[c] = 1;
      NodeId pick = -1;
      int pick_score = -1;
      for (NodeId c : cand) {
        int score = 0;
        for (NodeId w : g.neighbors(c)) score += in_cand[w];
        if (score > pick_score) pick = c, pick_score = score;
      }
      for (NodeId c : cand) in_cand[c] = 0;
      clique.push_back(pick);
      std::vector<NodeId> next;
      for (NodeId c : cand)
        if (c != pick && g.has_edge(pick, c)) next.push_back(c);
      cand = std::move(next);
    }
    if (clique.size() > best.size()) best = clique;
  }
  std::sort(best.begin(), best.end());
  return best;
}

// BFS 2-colouring; empty result when g has an odd cycle.
inline Coloring two_coloring(const Graph& g) {
  const NodeId n = g.node_count();
  Coloring col(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    if (col[s]) continue;
    col[s] = 1;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      NodeId u = queue[h];
      for (NodeId w : g.neighbors(u)) {
        if (!col[w]) {
          col[w] = 3 - col[u];
          queue.push_back(w);
        } else if (col[w] == col[u]) {
          return {};
        }
      }
    }
  }
  return col;
}

// Saturation-degree search for a colouring with at most k colours.
// Vertex choice: highest saturation, then most uncoloured neighbours, then
// lowest id. Colours are tried in increasing order.
class DsaturSearch {
 public:
  enum class Outcome { Found, Refuted, OutOfBudget };

  explicit DsaturSearch(const Graph& g) : g_(g), n_(g.node_count()) {}

  Outcome find(int k, std::uint64_t budget, Coloring& out) {
    k_ = k;
    limit_ = expansions_ + budget;
    color_.assign(static_cast<std::size_t>(n_), -1);
    count_.assign(static_cast<std::size_t>(n_) * k, 0);
    sat_.assign(static_cast<std::size_t>(n_), 0);
    udeg_.resize(static_cast<std::size_t>(n_));
    for (NodeId v = 0; v < n_; ++v) udeg_[v] = g_.degree(v);
    uncolored_.resize(static_cast<std::size_t>(n_));
    std::iota(uncolored_.begin(), uncolored_.end(), 0);
    out_of_budget_ = false;
    bool ok = dfs(0);
    if (ok) {
      out.resize(static_cast<std::size_t>(n_));
      for (NodeId v = 0; v < n_; ++v) out[v] = color_[v] + 1;
      return Outcome::Found;
    }
    return out_of_budget_ ? Outcome::OutOfBudget : Outcome::Refuted;
  }

  std::uint64_t expansions() const { return expansions_; }

  // One greedy descent without backtracking: the classic DSATUR heuristic.
  Coloring greedy() {
    Coloring col(static_cast<std::size_t>(n_), 0);
    std::vector<std::vector<char>> seen(static_cast<std::size_t>(n_));
    std::vector<int> sat(static_cast<std::size_t>(n_), 0);
    for (NodeId step = 0; step < n_; ++step) {
      NodeId best = -1;
      for (NodeId v = 0; v < n_; ++v) {
        if (col[v]) continue;
        if (best == -1 || sat[v] > sat[best] || (sat[v] == sat[best] && g_.degree(v) > g_.degree(best))) best = v;
      }
      auto& s = seen[best];
      int c = 1;
      while (c < static_cast<int>(s.size()) && s[c]) ++c;
      col[best] = c;
      for (NodeId w : g_.neighbors(best)) {
        auto& sw = seen[w];
        if (static_cast<int>(sw.size()) <= c) sw.resize(c + 1, 0);
        if (!sw[c]) {
          sw[c] = 1;
          ++sat[w];
        }
      }
    }
    return col;
  }

 private:
  int& cnt(NodeId v, int c) { return count_[static_cast<std::size_t>(v) * k_ + c]; }

  NodeId select() const {
    NodeId best = -1;
    for (NodeId v : uncolored_) {
      if (best == -1 || sat_[v] > sat_[best] ||
          (sat_[v] == sat_[best] && (udeg_[v] > udeg_[best] || (udeg_[v] == udeg_[best] && v < best))))
        best = v;
    }
    return best;
  }

  void assign(NodeId v, int c) {
    color_[v] = c;
    for (NodeId w : g_.neighbors(v)) {
      if (cnt(w, c)++ == 0) ++sat_[w];
      --udeg_[w];
    }
  }

  void unassign(NodeId v, int c) {
    color_[v] = -1;
    for (NodeId w : g_.neighbors(v)) {
      if (--cnt(w, c) == 0) --sat_[w];
      ++udeg_[w];
    }
  }

  bool dfs(int used) {
    if (uncolored_.empty()) return true;
    NodeId v = select();
    if (sat_[v] >= k_) return false;
    auto pos = std::find(uncolored_.begin(), uncolored_.end(), v) - uncolored_.begin();
    std::swap(uncolored_[pos], uncolored_.back());
    uncolored_.pop_back();
    const int top = std::min(used, k_ - 1);
    for (int c = 0; c <= top; ++c) {
      if (cnt(v, c) != 0) continue;
      if (expansions_ >= limit_) {
        out_of_budget_ = true;
        break;
      }
      ++expansions_;
      assign(v, c);
      if (dfs(std::max(used, c + 1))) return true;
      unassign(v, c);
      if (out_of_budget_) break;
    }
    uncolored_.push_back(v);
    std::swap(uncolored_[pos], uncolored_.back());
    return false;
  }

  const Graph& g_;
  NodeId n_;
  int k_ = 0;
  std::uint64_t expansions_ = 0;
  std::uint64_t limit_ = 0;
  bool out_of_budget_ = false;
  std::vector<int> color_, count_, sat_, udeg_;
  std::vector<NodeId> uncolored_;
};

// Open-addressing set of 64-bit keys; ~0 marks an empty slot. Occupied
// positions are also listed densely so clearing and iteration cost O(size).
class StateSet {
 public:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  StateSet() : table_(1u << 8, kEmpty) {}

  void clear() {
    for (auto i : used_) table_[i] = kEmpty;
    used_.clear();
  }

  void insert(std::uint64_t key) {
    if (2 * (used_.size() + 1) > table_.size()) grow();
    const std::size_t mask = table_.size() - 1;
    std::size_t i = mix64(key) & mask;
    while (table_[i] != kEmpty) {
      if (table_[i] == key) return;
      i = (i + 1) & mask;
    }
    table_[i] = key;
    used_.push_back(static_cast<std::uint32_t>(i));
  }

  std::size_t size() const { return used_.size(); }

  template <class F>
  void for_each(F&& f) const {
    for (auto i : used_) f(table_[i]);
  }

 private:
  void grow() {
    std::vector<std::uint64_t> keys;
    keys.reserve(used_.size());
    for (auto i : used_) keys.push_back(table_[i]);
    table_.assign(table_.size() * 2, kEmpty);
    used_.clear();
    for (auto k : keys) insert(k);
  }

  std::vector<std::uint64_t> table_;
  std::vector<std::uint32_t> used_;
};

// Elimination order with a narrow "frontier" (placed nodes that still have
// unplaced neighbours). Greedy: always place the node that leaves the
// smallest frontier; ties by most placed neighbours, then lowest id.
inline std::vector<NodeId> frontier_order(const Graph& g, NodeId start, int& width) {
  const NodeId n = g.node_count();
  std::vector<NodeId> order;
  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  std::vector<int> remaining(static_cast<std::size_t>(n)), placed_nbrs(static_cast<std::size_t>(n), 0);
  for (NodeId v = 0; v < n; ++v) remaining[v] = g.degree(v);
  int frontier = 0;
  width = 0;
  std::vector<char> candidate(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> cands;
  auto place = [&](NodeId v) {
    placed[v] = 1;
    order.push_back(v);
    width = std::max(width, frontier + 1);
    for (NodeId w : g.neighbors(v)) {
      --remaining[w];
      ++placed_nbrs[w];
      if (placed[w] && remaining[w] == 0) --frontier;
      if (!placed[w] && !candidate[w]) {
        candidate[w] = 1;
        cands.push_back(w);
      }
    }
    if (remaining[v] > 0) ++frontier;
  };
  NodeId next_fresh = 0;
  while (static_cast<NodeId>(order.size()) < n) {
    NodeId best = -1;
    int best_f = 0;
    for (NodeId c : cands) {
      if (placed[c]) continue;
      int leave = 0;
      for (NodeId w : g.neighbors(c))
        if (placed[w] && remaining[w] == 1) ++leave;
      // remaining[c] counts the unplaced neighbours of c
      const int f = frontier - leave + (remaining[c] > 0 ? 1 : 0);
      if (best == -1 || f < best_f || (f == best_f && placed_nbrs[c] > placed_nbrs[best]) ||
          (f == best_f && placed_nbrs[c] == placed_nbrs[best] && c < best)) {
        best = c;
        best_f = f;
      }
    }
    cands.erase(std::remove_if(cands.begin(), cands.end(), [&](NodeId c) { return placed[c]; }), cands.end());
    if (best == -1) {
      if (order.empty()) {
        best = start;
      } else {
        while (placed[next_fresh]) ++next_fresh;
        best = next_fresh;
      }
    }
    place(best);
  }
  return order;
}

// Decides k-colourability (k in {3, 4}) by dynamic programming over the
// colourings of the frontier, modulo colour permutations, two bits per slot.
// When a layer grows large, its states are split by the colours of frontier
// nodes that stay on the frontier for a long time; such groups can never
// merge again, so they are finished one at a time in small tables.
class FrontierDp {
 public:
  enum class Outcome { Colorable, NotColorable, Inapplicable };

  static constexpr int kMaxSlots = 32;
  static constexpr std::size_t kGroupThreshold = 1u << 12;

  FrontierDp(const Graph& g, std::uint64_t state_limit) : g_(g), state_limit_(state_limit) {}

  Outcome decide(int k, std::vector<NodeId> order = {}) {
    const NodeId n = g_.node_count();
    if (k < 3 || k > 4 || n == 0) return Outcome::Inapplicable;
    if (order.empty()) order = best_order();
    if (order.empty() || !plan(order)) return Outcome::Inapplicable;
    k_ = k;
    overflow_ = false;
    bool ok = colorable_from({0}, 0, 0);
    if (overflow_) return Outcome::Inapplicable;
    return ok ? Outcome::Colorable : Outcome::NotColorable;
  }

  std::uint64_t peak_states() const { return peak_; }
  int width() const { return width_; }

 private:
  static constexpr std::uint64_t kLow = 0x5555555555555555ULL;

  struct Step {
    std::uint64_t sbit;        // low bit of the new node's slot
    std::uint64_t nbr;         // low bits of placed neighbours
    std::uint64_t live;        // live low bits before the step
    std::uint64_t live_after;  // live low bits after the step
    std::uint64_t clear;       // mask erasing slots that leave
    std::uint64_t long_lived;  // low bits of slots that stay for long
  };

  // Assigns slots along the order; fails when the frontier is too wide.
  bool plan(const std::vector<NodeId>& order) {
    const NodeId n = g_.node_count();
    std::vector<int> pos(static_cast<std::size_t>(n)), death(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) pos[order[i]] = i;
    for (NodeId v = 0; v < n; ++v) {
      death[v] = pos[v];
      for (NodeId w : g_.neighbors(v)) death[v] = std::max(death[v], pos[w]);
    }
    // Frontier width along the order: nodes placed and not yet dead.
    width_ = 0;
    {
      std::vector<int> dying(static_cast<std::size_t>(n) + 1, 0);
      int alive = 0;
      for (NodeId t = 0; t < n; ++t) {
        width_ = std::max(width_, alive + 1);
        ++alive;
        ++dying[death[order[t]]];
        alive -= dying[t];
      }
    }
    if (width_ > kMaxSlots) return false;
    // Slots whose node survives to the last `width_` steps while many steps
    // remain; states differing there can never merge.
    auto long_lived = [&](NodeId v, NodeId t) { return n - t > 2 * width_ && death[v] >= n - width_; };

    std::vector<int> slot(static_cast<std::size_t>(n), -1);
    std::vector<NodeId> at_slot(kMaxSlots, -1);
    std::uint32_t free_slots = ~0u;
    std::uint64_t live = 0;
    steps_.clear();
    for (NodeId t = 0; t < n; ++t) {
      const NodeId v = order[t];
      if (free_slots == 0) return false;
      const int s = std::countr_zero(free_slots);
      free_slots &= ~(1u << s);
      slot[v] = s;
      at_slot[s] = v;
      Step st{};
      st.sbit = std::uint64_t{1} << (2 * s);
      st.live = live;
      std::uint64_t leave = 0;
      for (NodeId w : g_.neighbors(v)) {
        if (pos[w] >= t) continue;
        st.nbr |= std::uint64_t{1} << (2 * slot[w]);
        if (death[w] == t) leave |= std::uint64_t{1} << (2 * slot[w]);
      }
      if (death[v] == t) leave |= st.sbit;
      for (int q = 0; q < kMaxSlots; ++q) {
        const std::uint64_t b = std::uint64_t{1} << (2 * q);
        if ((live & b) && long_lived(at_slot[q], t)) st.long_lived |= b;
      }
      st.live_after = (live | st.sbit) & ~leave;
      st.clear = ~(leave | (leave << 1));
      for (int q = 0; q < kMaxSlots; ++q)
        if (leave & (std::uint64_t{1} << (2 * q))) free_slots |= 1u << q;
      live = st.live_after;
      steps_.push_back(st);
    }
    return true;
  }

  // Sorts and deduplicates; LSD radix sort over the occupied bytes.
  void sort_unique(std::vector<std::uint64_t>& v) {
    if (v.size() < 2048) {
      std::sort(v.begin(), v.end());
    } else {
      std::uint64_t all = 0;
      for (auto x : v) all |= x;
      scratch_.resize(v.size());
      for (int shift = 0; shift < 64 && (all >> shift) != 0; shift += 8) {
        std::size_t count[257] = {};
        for (auto x : v) ++count[((x >> shift) & 0xff) + 1];
        for (int b = 0; b < 256; ++b) count[b + 1] += count[b];
        for (auto x : v) scratch_[count[(x >> shift) & 0xff]++] = x;
        v.swap(scratch_);
      }
    }
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  bool colorable_from(std::vector<std::uint64_t> cur, std::size_t t, std::uint64_t grouped) {
    std::vector<std::uint64_t> next;
    for (; t < steps_.size(); ++t) {
      const Step& st = steps_[t];
      if (cur.size() > kGroupThreshold && (st.long_lived & ~grouped) != 0) {
        const std::uint64_t key_mask = st.long_lived | (st.long_lived << 1);
        std::sort(cur.begin(), cur.end(), [&](std::uint64_t a, std::uint64_t b) {
          return (a & key_mask) != (b & key_mask) ? (a & key_mask) < (b & key_mask) : a < b;
        });
        if ((cur.front() & key_mask) != (cur.back() & key_mask)) {
          std::size_t i = 0;
          while (i < cur.size()) {
            std::size_t j = i;
            while (j < cur.size() && (cur[j] & key_mask) == (cur[i] & key_mask)) ++j;
            std::vector<std::uint64_t> group(cur.begin() + i, cur.begin() + j);
            if (colorable_from(std::move(group), t, st.long_lived)) return true;
            if (overflow_) return false;
            i = j;
          }
          return false;
        }
        grouped |= st.long_lived;
      }

      next.clear();
      for (std::uint64_t x : cur) {
        std::uint64_t m[4];
        masks(x, st.live, m);
        int distinct = 0;
        for (int c = 0; c < 4; ++c) distinct += m[c] != 0;
        const int top = std::min(distinct, k_ - 1);
        for (int c = 0; c <= top; ++c) {
          if (m[c] & st.nbr) continue;
          std::uint64_t y = x | ((c & 1) ? st.sbit : 0) | ((c & 2) ? st.sbit << 1 : 0);
          next.push_back(canonical(y & st.clear, st.live_after));
        }
      }
      sort_unique(next);
      if (next.size() > state_limit_) {
        overflow_ = true;
        return false;
      }
      if (next.empty()) return false;
      cur.swap(next);
      peak_ = std::max<std::uint64_t>(peak_, cur.size());
    }
    return true;
  }

  static void masks(std::uint64_t x, std::uint64_t live, std::uint64_t m[4]) {
    const std::uint64_t lo = x & kLow, hi = (x >> 1) & kLow;
    m[0] = live & ~lo & ~hi;
    m[1] = live & lo & ~hi;
    m[2] = live & ~lo & hi;
    m[3] = live & lo & hi;
  }

  // Relabels colours in order of first appearance along the slots.
  static std::uint64_t canonical(std::uint64_t x, std::uint64_t live) {
    std::uint64_t m[4];
    masks(x, live, m);
    int first[4];
    for (int c = 0; c < 4; ++c) first[c] = m[c] ? std::countr_zero(m[c]) : 64 + c;
    std::uint64_t y = 0;
    for (int c = 0; c < 4; ++c) {
      const int r = (first[0] < first[c]) + (first[1] < first[c]) + (first[2] < first[c]) + (first[3] < first[c]);
      y |= (m[c] & (0 - static_cast<std::uint64_t>(r & 1))) | ((m[c] << 1) & (0 - static_cast<std::uint64_t>(r >> 1)));
    }
    return y;
  }

  std::vector<NodeId> best_order() {
    const NodeId n = g_.node_count();
    const NodeId probes = std::min<NodeId>(n, 8);
    std::vector<NodeId> best;
    int best_w = kMaxSlots + 1;
    for (NodeId i = 0; i < probes; ++i) {
      int w = 0;
      auto order = frontier_order(g_, static_cast<NodeId>((static_cast<std::int64_t>(i) * n) / probes), w);
      if (w < best_w) {
        best_w = w;
        best = std::move(order);
      }
    }
    if (best_w > kMaxSlots) return {};
    return best;
  }

  const Graph& g_;
  std::uint64_t state_limit_;
  std::vector<Step> steps_;
  std::vector<std::uint64_t> scratch_;
  int k_ = 3;
  bool overflow_ = false;
  std::uint64_t peak_ = 0;
  int width_ = 0;
};

}  // namespace detail

struct ChromaticBracket {
  int lower = 0;
  int upper = 0;
  bool exact() const { return lower == upper; }
  ChromaticCertificate certificate;  // holds the best witnesses found
};

struct SolverOptions {
  std::uint64_t budget = kDefaultSolverBudget;  // branch-and-bound expansions
  std::uint64_t probe = 200'000;                // expansions tried before the frontier DP
  std::uint64_t dp_state_limit = std::uint64_t{1} << 25;
  std::vector<NodeId> order_hint;  // elimination order for the frontier DP; empty picks one greedily
};

// Computes chi(g) or the best bracket within the budget; never throws on
// budget exhaustion.
inline ChromaticBracket chromatic_bracket(const Graph& g, const SolverOptions& opt = {}) {
  const NodeId n = g.node_count();
  if (n == 0) throw Error(ErrorKind::EmptyGraph, "chromatic number of the empty graph");
  ChromaticBracket out;
  auto& cert = out.certificate;
  cert.graph_sha256 = graph_sha256(g);

  auto finish = [&](int chi, Coloring col, std::string proof) {
    out.lower = out.upper = chi;
    cert.chi = chi;
    cert.coloring = std::move(col);
    cert.lower_proof = std::move(proof);
    return out;
  };

  if (g.edge_count() == 0) {
    cert.clique = {0};
    return finish(1, Coloring(static_cast<std::size_t>(n), 1), "clique");
  }
  cert.clique = detail::greedy_clique(g);
  if (auto two = detail::two_coloring(g); !two.empty()) return finish(2, std::move(two), "clique");

  int lo = std::max<int>(3, static_cast<int>(cert.clique.size()));
  std::string proof = cert.clique.size() >= 3 ? "clique" : "odd_cycle";
  detail::DsaturSearch search(g);
  Coloring best = search.greedy();
  int ub = *std::max_element(best.begin(), best.end());

  auto remaining = [&] { return opt.budget - std::min(opt.budget, search.expansions()); };
  while (lo < ub) {
    Coloring col;
    auto r = search.find(ub - 1, std::min(opt.probe, remaining()), col);
    if (r == detail::DsaturSearch::Outcome::OutOfBudget) {
      detail::FrontierDp dp(g, opt.dp_state_limit);
      auto d = dp.decide(ub - 1, opt.order_hint);
      if (d == detail::FrontierDp::Outcome::NotColorable) {
        lo = ub;
        proof = "frontier_dp";
        break;
      }
      r = search.find(ub - 1, remaining(), col);
    }
    if (r == detail::DsaturSearch::Outcome::Found) {
      best = std::move(col);
      ub = *std::max_element(best.begin(), best.end());
    } else if (r == detail::DsaturSearch::Outcome::Refuted) {
      lo = ub;
      proof = "search";
    } else {
      break;
    }
  }
  cert.expansions = search.expansions();
  if (lo == ub) return finish(ub, std::move(best), proof);
  out.lower = lo;
  out.upper = ub;
  cert.chi = ub;
  cert.coloring = std::move(best);
  cert.lower_proof = proof;
  return out;
}

inline ChromaticCertificate exact_chromatic_number(const Graph& g, std::uint64_t budget = kDefaultSolverBudget) {
  SolverOptions opt;
  opt.budget = budget;
  auto b = chromatic_bracket(g, opt);
  if (!b.exact())
    throw BudgetExceededError(b.lower, b.upper,
                              "chromatic number in [" + std::to_string(b.lower) + ", " + std::to_string(b.upper) + "]");
  return std::move(b.certificate);
}

struct LocalChromatic {
  int value = 0;
  NodeId argmax = 0;
};

inline LocalChromatic local_chromatic_number(const Graph& g, int r, std::uint64_t budget = kDefaultSolverBudget) {
  LocalChromatic out;
  Bfs bfs(g);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto sub = induced_subgraph(g, NodeSet::from_unsorted(bfs.run_from(v, r)));
    int chi = exact_chromatic_number(sub.graph, budget).chi;
    if (chi > out.value) {
      out.value = chi;
      out.argmax = v;
    }
  }
  return out;
}

// Length of a shortest cycle; nullopt for forests.
inline std::optional<int> girth(const Graph& g) {
  const NodeId n = g.node_count();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<NodeId> parent(static_cast<std::size_t>(n), -1), queue;
  for (NodeId root = 0; root < n; ++root) {
    for (NodeId v : queue) dist[v] = -1;
    queue.assign(1, root);
    dist[root] = 0;
    parent[root] = -1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      NodeId u = queue[h];
      if (2 * dist[u] + 1 >= best) break;
      for (NodeId w : g.neighbors(u)) {
        if (dist[w] == -1) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (w != parent[u]) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

// ---------------------------------------------------------------------------
// Clustering and decomposition verifiers

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> violations;
  void fail(std::string clause) {
    ok = false;
    violations.push_back(std::move(clause));
  }
};

inline Json to_json(const VerifyReport& r) { return Json{{"ok", r.ok}, {"violations", r.violations}}; }

namespace detail {

// Cluster index per node (-1 if none); reports overlaps.
inline std::vector<int> cluster_index(const Graph& g, const std::vector<NodeSet>& clusters, bool& overlap) {
  std::vector<int> idx(static_cast<std::size_t>(g.node_count()), -1);
  overlap = false;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    for (NodeId v : clusters[i]) {
      if (v < 0 || v >= g.node_count()) throw Error(ErrorKind::OutOfRange, "cluster node out of range");
      if (idx[v] != -1) overlap = true;
      idx[v] = static_cast<int>(i);
    }
  return idx;
}

inline int max_weak_diameter(const Graph& g, const std::vector<NodeSet>& clusters, bool& disconnected) {
  int d = 0;
  disconnected = false;
  for (const auto& c : clusters) {
    try {
      d = std::max(d, weak_diameter(g, c));
    } catch (const Error&) {
      disconnected = true;
    }
  }
  return d;
}

}  // namespace detail

inline VerifyReport verify_clustering(const Graph& g, const Clustering& cl, double lambda, double d) {
  VerifyReport rep;
  bool overlap = false;
  auto idx = detail::cluster_index(g, cl.clusters, overlap);
  bool adjacent = false;
  for (auto [u, v] : g.edges())
    if (idx[u] != -1 && idx[v] != -1 && idx[u] != idx[v]) adjacent = true;
  if (overlap || adjacent) rep.fail("(a) clusters must be pairwise disjoint and non-adjacent");

  for (NodeId v : cl.unclustered)
    if (idx[v] != -1) overlap = true;
  std::size_t covered = cl.unclustered.size();
  for (const auto& c : cl.clusters) covered += c.size();
  if (overlap || covered != static_cast<std::size_t>(g.node_count()))
    rep.fail("partition: clusters and unclustered nodes must partition V");

  bool disconnected = false;
  int diam = detail::max_weak_diameter(g, cl.clusters, disconnected);
  if (disconnected || diam > d) rep.fail("(b) weak diameter " + std::to_string(diam) + " exceeds bound");

  if (static_cast<double>(cl.unclustered.size()) > lambda * g.node_count() + 1e-9)
    rep.fail("(c) " + std::to_string(cl.unclustered.size()) + " unclustered nodes exceed lambda * n");
  return rep;
}

inline VerifyReport verify_decomposition(const Graph& g, const NetworkDecomposition& D, int alpha, double d) {
  VerifyReport rep;
  if (D.colors.size() != D.clusters.size()) {
    rep.fail("every cluster needs exactly one colour");
    return rep;
  }
  bool overlap = false;
  auto idx = detail::cluster_index(g, D.clusters, overlap);
  if (overlap || std::count(idx.begin(), idx.end(), -1) != 0) rep.fail("clusters must partition V");
  for (int c : D.colors)
    if (c < 1 || c > alpha) {
      rep.fail("cluster colour outside 1..alpha");
      break;
    }
  bool disconnected = false;
  int diam = detail::max_weak_diameter(g, D.clusters, disconnected);
  if (disconnected || diam > d) rep.fail("weak diameter " + std::to_string(diam) + " exceeds bound");
  for (auto [u, v] : g.edges()) {
    if (idx[u] == -1 || idx[v] == -1 || idx[u] == idx[v]) continue;
    if (D.colors[idx[u]] == D.colors[idx[v]]) {
      rep.fail("adjacent clusters share colour (edge " + std::to_string(u) + "-" + std::to_string(v) + ")");
      break;
    }
  }
  return rep;
}

}  // namespace lcol
