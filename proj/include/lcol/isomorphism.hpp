#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lcol/graph.hpp"

namespace lcol {

struct IsomorphismResult {
  bool isomorphic = false;
  std::vector<NodeId> mapping;  // g node -> h node when isomorphic
};

namespace detail {

// Colour refinement on the disjoint union of g and h, followed by
// individualisation and backtracking.
class IsoSearch {
 public:
  IsoSearch(const Graph& g, const Graph& h, std::uint64_t budget) : g_(g), h_(h), budget_(budget) {
    n_ = g.node_count();
  }

  std::optional<std::vector<NodeId>> solve(std::vector<int> colors) {
    if (!refine(colors)) return std::nullopt;
    return search(std::move(colors));
  }

 private:
  std::span<const NodeId> nbrs(int v) const {
    return v < n_ ? g_.neighbors(v) : h_.neighbors(v - n_);
  }
  int offset(int v) const { return v < n_ ? 0 : n_; }

  // Refines to the coarsest equitable partition. Returns false as soon as the
  // two sides disagree on some colour class size.
  bool refine(std::vector<int>& colors) {
    const int N = 2 * n_;
    int classes = count_classes(colors);
    std::vector<std::pair<std::vector<int>, int>> sigs(N);
    while (true) {
      for (int v = 0; v < N; ++v) {
        auto& s = sigs[v].first;
        s.clear();
        s.push_back(colors[v]);
        for (NodeId w : nbrs(v)) s.push_back(colors[w + offset(v)]);
        std::sort(s.begin() + 1, s.end());
        sigs[v].second = v;
      }
      std::sort(sigs.begin(), sigs.end());
      int c = -1;
      for (int i = 0; i < N; ++i) {
        if (i == 0 || sigs[i].first != sigs[i - 1].first) ++c;
        colors[sigs[i].second] = c;
      }
      const int now = c + 1;
      if (!balanced(colors, now)) return false;
      if (now == classes) return true;
      classes = now;
    }
  }

  static int count_classes(const std::vector<int>& colors) {
    std::vector<int> c(colors);
    std::sort(c.begin(), c.end());
    return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
  }

  bool balanced(const std::vector<int>& colors, int classes) const {
    std::vector<int> diff(static_cast<std::size_t>(classes), 0);
    for (int v = 0; v < n_; ++v) ++diff[colors[v]];
    for (int v = n_; v < 2 * n_; ++v) --diff[colors[v]];
    return std::all_of(diff.begin(), diff.end(), [](int d) { return d == 0; });
  }

  std::optional<std::vector<NodeId>> search(std::vector<int> colors) {
    if (++steps_ > budget_) throw Error(ErrorKind::TooLarge, "isomorphism search budget exceeded");
    const int classes = *std::max_element(colors.begin(), colors.end()) + 1;
    std::vector<int> size(static_cast<std::size_t>(classes), 0);
    for (int v = 0; v < n_; ++v) ++size[colors[v]];
    int target = -1;
    for (int c = 0; c < classes; ++c)
      if (size[c] > 1 && (target == -1 || size[c] < size[target])) target = c;

    if (target == -1) {
      std::vector<NodeId> by_color(static_cast<std::size_t>(classes), -1);
      for (int v = n_; v < 2 * n_; ++v) by_color[colors[v]] = v - n_;
      std::vector<NodeId> map(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) map[v] = by_color[colors[v]];
      for (auto [u, v] : g_.edges())
        if (!h_.has_edge(map[u], map[v])) return std::nullopt;
      return map;
    }

    int x = 0;
    while (colors[x] != target) ++x;
    for (int y = n_; y < 2 * n_; ++y) {
      if (colors[y] != target) continue;
      std::vector<int> next(colors);
      next[x] = classes;
      next[y] = classes;
      if (!refine(next)) continue;
      if (auto m = search(std::move(next))) return m;
    }
    return std::nullopt;
  }

  const Graph& g_;
  const Graph& h_;
  NodeId n_ = 0;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultIsoBudget = 10'000'000;

// Optional initial colourings restrict the search to colour-preserving maps.
inline IsomorphismResult is_isomorphic(const Graph& g, const Graph& h, const std::vector<int>& g_colors = {},
                                       const std::vector<int>& h_colors = {},
                                       std::uint64_t budget = kDefaultIsoBudget) {
  IsomorphismResult out;
  if (g.node_count() != h.node_count() || g.edge_count() != h.edge_count()) return out;
  const NodeId n = g.node_count();
  if (n == 0) {
    out.isomorphic = true;
    return out;
  }
  std::map<std::pair<int, int>, int> keys;
  std::vector<std::pair<int, int>> raw(2 * static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    raw[v] = {g_colors.empty() ? 0 : g_colors[v], g.degree(v)};
    raw[n + v] = {h_colors.empty() ? 0 : h_colors[v], h.degree(v)};
  }
  for (auto& k : raw) keys.emplace(k, 0);
  int next = 0;
  for (auto& [k, id] : keys) id = next++;
  std::vector<int> colors(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) colors[i] = keys[raw[i]];

  detail::IsoSearch search(g, h, budget);
  if (auto m = search.solve(std::move(colors))) {
    out.isomorphic = true;
    out.mapping = std::move(*m);
  }
  return out;
}

}  // namespace lcol
