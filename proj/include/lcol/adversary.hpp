#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/beta.hpp>

#include "lcol/analysis.hpp"
#include "lcol/coloring.hpp"
#include "lcol/gadgets.hpp"
#include "lcol/graph.hpp"
#include "lcol/io.hpp"
#include "lcol/rng.hpp"

namespace lcol {

// ---------------------------------------------------------------------------
// Gadget selection

enum class GadgetKind { RJoin, KB };

struct GadgetSpec {
  GadgetKind kind = GadgetKind::KB;
  int chi = 2, r = 3, k = 2;  // rjoin
  int W = 9, H = 9;           // kb

  std::string id() const {
    if (kind == GadgetKind::RJoin)
      return "rjoin(" + std::to_string(chi) + "," + std::to_string(r) + "," + std::to_string(k) + ")";
    return "kb(" + std::to_string(W) + "," + std::to_string(H) + ")";
  }
};

inline Graph make_gadget(const GadgetSpec& s) {
  return s.kind == GadgetKind::RJoin ? rjoin_gadget(s.chi, s.r, s.k) : kb_gadget(s.W, s.H);
}

inline SubgraphCover make_cover(const GadgetSpec& s, bool certify = false) {
  return s.kind == GadgetKind::RJoin ? rjoin_cover(s.chi, s.r, s.k, certify) : kb_cover(s.W, s.H, certify);
}

// Colours an honest algorithm needs on members of the family: the chromatic
// family is chi-colourable inside k(chi-1), grids are bipartite.
inline int family_color_claim(const GadgetSpec& s) { return s.kind == GadgetKind::RJoin ? s.k * (s.chi - 1) : 3; }

struct GridTarget {
  int W = 0, H = 0;
};

// Smallest default targets: N patch extents side by side (grid), or exactly
// the patch neighbourhoods (chromatic).
inline GridTarget default_grid_target(const GadgetSpec& s, const SubgraphCover& cover, int N) {
  auto [pw, ph] = patch_extent(*cover.patch, cover.T);
  return {pw * N, std::max(ph, s.H)};
}

inline NodeId default_chromatic_target(const Graph& gadget, const SubgraphCover& cover, const std::vector<int>& x) {
  NodeId n = 0;
  for (int i : x) n += static_cast<NodeId>(neighborhood_of_set(gadget, cover.elements.at(i - 1), cover.T).size());
  return n;
}

// Dispatches to the chromatic or grid assembly. `n` is the node count for the
// chromatic family; `grid` the target dimensions for the grid family.
inline CheatingInstance assemble_cheating_instance(const GadgetSpec& s, const std::vector<int>& x,
                                                   std::optional<NodeId> n = std::nullopt,
                                                   std::optional<GridTarget> grid = std::nullopt) {
  Graph gadget = make_gadget(s);
  SubgraphCover cover = make_cover(s);
  if (x.empty()) throw Error(ErrorKind::DoesNotFit, "need at least one copy");
  if (s.kind == GadgetKind::RJoin)
    return assemble_chromatic_instance(gadget, cover, x, n.value_or(default_chromatic_target(gadget, cover, x)),
                                       s.chi);
  GridTarget t = grid.value_or(default_grid_target(s, cover, static_cast<int>(x.size())));
  return assemble_grid_instance(s.W, s.H, cover, x, t.W, t.H);
}

// ---------------------------------------------------------------------------
// Victims

using NodeIds = std::vector<std::uint64_t>;

// A sealed colouring procedure with its declared locality (nullopt: global)
// and the number of colours it claims to use.
struct Victim {
  std::string name;
  std::optional<int> locality;
  int c = 3;
  std::function<Coloring(const Graph&, const NodeIds& ids, const NodeIds& seeds)> run;
};

inline Victim const1_victim(int c = 3) {
  return {"const1", 0, c, [](const Graph& g, const NodeIds&, const NodeIds&) {
            return Coloring(static_cast<std::size_t>(g.node_count()), 1);
          }};
}

// Every node runs the randomized pipeline on its own radius-T view (nodes
// ordered by id) and keeps its own colour. Randomness is a hash of the view's
// (id, seed) pairs, so equal views give equal outputs. A node whose run gives
// up outputs 0.
inline Victim pipeline_victim(int T, int c = 3, int alpha = 2) {
  return {"pipeline3", T, c, [T, alpha](const Graph& g, const NodeIds& ids, const NodeIds& seeds) {
            const NodeId n = g.node_count();
            Coloring out(static_cast<std::size_t>(n), 0);
            Bfs bfs(g);
            for (NodeId v = 0; v < n; ++v) {
              std::vector<NodeId> view(bfs.run_from(v, T));
              std::sort(view.begin(), view.end(), [&](NodeId a, NodeId b) { return ids[a] < ids[b]; });
              std::map<NodeId, NodeId> local;
              std::uint64_t h = mix64(0x7669657775ULL);
              for (NodeId u : view) {
                local.emplace(u, static_cast<NodeId>(local.size()));
                h = mix64(mix64(h ^ ids[u]) ^ seeds[u]);
              }
              std::vector<Edge> edges;
              for (NodeId u : view)
                for (NodeId w : g.neighbors(u))
                  if (auto it = local.find(w); it != local.end() && local[u] < it->second)
                    edges.emplace_back(local[u], it->second);
              Graph ball = build_graph(static_cast<NodeId>(view.size()), std::move(edges));
              try {
                out[v] = full_pipeline(ball, alpha, Mode::Rand, h).coloring[local[v]];
              } catch (const Error& e) {
                // Exhausted clustering retries: the node gives up, which counts as a violation.
                if (e.kind() != ErrorKind::GuaranteeViolated) throw;
              }
            }
            return out;
          }};
}

// Exact optimal colouring of the whole input; needs global knowledge.
inline Victim honest_victim(int c) {
  auto cache = std::make_shared<std::pair<std::mutex, std::map<std::string, Coloring>>>();
  return {"honest", std::nullopt, c, [cache](const Graph& g, const NodeIds&, const NodeIds&) {
            const std::string key = graph_sha256(g);
            {
              std::lock_guard lock(cache->first);
              if (auto it = cache->second.find(key); it != cache->second.end()) return it->second;
            }
            Coloring col = exact_chromatic_number(g).coloring;
            std::lock_guard lock(cache->first);
            cache->second.emplace(key, col);
            return col;
          }};
}

// ---------------------------------------------------------------------------
// Statistics

struct Interval {
  double lo = 0.0, hi = 1.0;
};

// Exact binomial (Clopper-Pearson) interval.
inline Interval clopper_pearson(std::int64_t successes, std::int64_t trials, double confidence = 0.95) {
  if (trials <= 0) return {};
  const double a = (1.0 - confidence) / 2.0;
  Interval iv;
  const double x = static_cast<double>(successes), n = static_cast<double>(trials);
  if (successes > 0) iv.lo = boost::math::quantile(boost::math::beta_distribution<>(x, n - x + 1.0), a);
  if (successes < trials) iv.hi = boost::math::quantile(boost::math::beta_distribution<>(x + 1.0, n - x), 1.0 - a);
  return iv;
}

inline double binomial_sigma(double p, std::int64_t trials) {
  return trials > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
}

inline double amplified_bound(int k, int N) { return 1.0 - std::pow(1.0 - 1.0 / k, N); }

// ---------------------------------------------------------------------------
// Harness

struct HarnessOptions {
  int jobs = 1;
  bool allow_global = false;        // admit victims without a declared locality
  std::optional<int> gadget_chi;    // when known, c < chi forces whole-gadget failure
  bool keep_trials = false;         // record per-trial outcomes
};

namespace detail {

template <class F>
void parallel_trials(int trials, int jobs, F&& body) {
  jobs = std::max(1, std::min(jobs, trials));
  if (jobs == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (int t; (t = next.fetch_add(1)) < trials;) {
        try {
          body(t);
        } catch (...) {
          std::lock_guard lock(m);
          if (!err) err = std::current_exception();
          next = trials;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// Violations restricted to `nodes`: monochromatic edges with both ends inside
// or nodes coloured outside 1..c.
inline bool violates(const Graph& g, const Coloring& col, const NodeSet& nodes, int c) {
  for (NodeId v : nodes) {
    if (col[v] < 1 || col[v] > c) return true;
    for (NodeId w : g.neighbors(v))
      if (w > v && col[w] == col[v] && nodes.contains(w)) return true;
  }
  return false;
}

inline void check_victim(const Victim& v, int T, bool allow_global) {
  if (!v.locality) {
    if (!allow_global) throw Error(ErrorKind::LocalityMismatch, "victim " + v.name + " is not local");
  } else if (*v.locality > T) {
    throw Error(ErrorKind::LocalityMismatch, "victim locality " + std::to_string(*v.locality) +
                                                 " exceeds cover radius " + std::to_string(T));
  }
}

}  // namespace detail

struct FailureEstimate {
  std::vector<double> rates;  // per element
  std::vector<std::int64_t> failures;
  double whole_rate = 0.0;
  std::int64_t whole_failures = 0;
  int trials = 0;
  std::vector<std::vector<char>> per_trial;  // [trial][element], when kept
};

// Runs the victim on the gadget itself. Ids are the node indices; node seeds
// are drawn per trial from (seed, trial, id).
inline FailureEstimate estimate_failure(const Graph& gadget, const SubgraphCover& cover, const Victim& victim,
                                        int trials, std::uint64_t seed, const HarnessOptions& opt = {}) {
  if (trials < 1) throw Error(ErrorKind::BadParams, "trials must be >= 1");
  detail::check_victim(victim, cover.T, opt.allow_global);
  const NodeId n = gadget.node_count();
  const std::size_t k = cover.elements.size();
  NodeIds ids(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) ids[v] = static_cast<std::uint64_t>(v);

  std::vector<std::vector<char>> fail(static_cast<std::size_t>(trials), std::vector<char>(k + 1, 0));
  detail::parallel_trials(trials, opt.jobs, [&](int t) {
    const std::uint64_t ts = derive_seed(seed, {std::uint64_t(t)});
    NodeIds seeds(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) seeds[v] = derive_seed(ts, {ids[v]});
    Coloring col = victim.run(gadget, ids, seeds);
    if (col.size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::BadParams, "victim output has wrong size");
    for (std::size_t i = 0; i < k; ++i) fail[t][i] = detail::violates(gadget, col, cover.elements[i], victim.c);
    fail[t][k] = detail::violates(gadget, col, NodeSet::range(n), victim.c);
  });

  FailureEstimate est;
  est.trials = trials;
  est.failures.assign(k, 0);
  for (const auto& row : fail) {
    for (std::size_t i = 0; i < k; ++i) est.failures[i] += row[i];
    est.whole_failures += row[k];
  }
  for (auto f : est.failures) est.rates.push_back(static_cast<double>(f) / trials);
  est.whole_rate = static_cast<double>(est.whole_failures) / trials;
  if (opt.gadget_chi && victim.c < *opt.gadget_chi && est.whole_failures != trials)
    throw Error(ErrorKind::GuaranteeViolated, "victim colours a " + std::to_string(*opt.gadget_chi) +
                                                  "-chromatic gadget with " + std::to_string(victim.c) + " colours");
  if (opt.keep_trials)
    for (auto& row : fail) est.per_trial.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k));
  return est;
}

struct AttackReport {
  std::string gadget;
  std::string victim;
  int c = 0;
  int k = 0;  // cover size
  int T = 0;
  FailureEstimate element;
  int i_star = 0;  // 1-based
  int N = 0;
  std::vector<int> x;
  std::string instance_family;
  NodeId instance_n = 0;
  int trials = 0;
  std::int64_t instance_failures = 0;
  double instance_rate = 0.0;
  Interval ci;
  double bound = 0.0;  // 1 - (1 - 1/k)^N
  double sigma = 0.0;  // binomial sd of the bound at this trial count
  std::vector<double> copy_rates;
  bool locality_sound = true;
  std::vector<char> instance_per_trial;
};

struct AttackSpec {
  GadgetSpec gadget;
  std::string victim = "pipeline3";
  std::optional<int> c;  // default: 3 for const1/pipeline3, family claim for honest
  int N = 1;
  int trials = 100;
  std::uint64_t seed = 0;
  HarnessOptions harness;
  std::optional<NodeId> target_n;
  std::optional<GridTarget> target_grid;
};

inline Victim make_victim(const std::string& name, const GadgetSpec& g, int T, std::optional<int> c) {
  if (name == "const1") return const1_victim(c.value_or(3));
  if (name == "pipeline3") return pipeline_victim(T, c.value_or(3));
  if (name == "honest") return honest_victim(c.value_or(family_color_claim(g)));
  throw Error(ErrorKind::BadParams, "unknown victim " + name);
}

// Measures per-element failure on the gadget, then runs the victim on N
// copies of the worst element assembled into one family member. Copies use
// the gadget's ids and independent per-copy node seeds. `victim` stands in
// for the one named in `spec`.
inline AttackReport run_attack(const AttackSpec& spec, const Victim& victim) {
  if (spec.N < 1) throw Error(ErrorKind::DoesNotFit, "need at least one copy");
  if (spec.trials < 1) throw Error(ErrorKind::BadParams, "trials must be >= 1");
  const Graph gadget = make_gadget(spec.gadget);
  const SubgraphCover cover = make_cover(spec.gadget);

  AttackReport rep;
  rep.gadget = spec.gadget.id();
  rep.victim = victim.name;
  rep.c = victim.c;
  rep.k = static_cast<int>(cover.elements.size());
  rep.T = cover.T;
  rep.N = spec.N;
  rep.trials = spec.trials;
  rep.locality_sound = victim.locality.has_value();
  rep.element = estimate_failure(gadget, cover, victim, spec.trials, derive_seed(spec.seed, {1}), spec.harness);
  rep.i_star = 1 + static_cast<int>(std::max_element(rep.element.rates.begin(), rep.element.rates.end()) -
                                    rep.element.rates.begin());
  rep.x.assign(static_cast<std::size_t>(spec.N), rep.i_star);

  CheatingInstance inst =
      spec.gadget.kind == GadgetKind::RJoin
          ? assemble_chromatic_instance(gadget, cover, rep.x,
                                        spec.target_n.value_or(default_chromatic_target(gadget, cover, rep.x)),
                                        spec.gadget.chi)
          : [&] {
              GridTarget t = spec.target_grid.value_or(default_grid_target(spec.gadget, cover, spec.N));
              return assemble_grid_instance(spec.gadget.W, spec.gadget.H, cover, rep.x, t.W, t.H);
            }();
  rep.instance_family = inst.family;
  const NodeId n = inst.graph.node_count();
  rep.instance_n = n;

  // Identity of each instance node: (copy, gadget node) for patch nodes.
  std::vector<std::pair<int, NodeId>> origin(static_cast<std::size_t>(n), {-1, -1});
  for (std::size_t j = 0; j < inst.patches.size(); ++j)
    for (auto [g, h] : inst.patches[j].map) origin[h] = {static_cast<int>(j), g};
  NodeIds ids(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v)
    ids[v] = origin[v].first >= 0 ? static_cast<std::uint64_t>(origin[v].second)
                                  : static_cast<std::uint64_t>(gadget.node_count() + v);

  std::vector<std::vector<char>> fail(static_cast<std::size_t>(spec.trials),
                                      std::vector<char>(inst.patches.size(), 0));
  const std::uint64_t base = derive_seed(spec.seed, {2});
  detail::parallel_trials(spec.trials, spec.harness.jobs, [&](int t) {
    const std::uint64_t ts = derive_seed(base, {std::uint64_t(t)});
    NodeIds seeds(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v)
      seeds[v] = origin[v].first >= 0 ? derive_seed(ts, {std::uint64_t(origin[v].first) + 1, ids[v]})
                                      : derive_seed(ts, {0, static_cast<std::uint64_t>(v)});
    Coloring col = victim.run(inst.graph, ids, seeds);
    if (col.size() != static_cast<std::size_t>(n)) throw Error(ErrorKind::BadParams, "victim output has wrong size");
    for (std::size_t j = 0; j < inst.patches.size(); ++j)
      fail[t][j] = detail::violates(inst.graph, col, inst.patches[j].element, victim.c);
  });

  rep.copy_rates.assign(inst.patches.size(), 0.0);
  for (const auto& row : fail) {
    bool any = std::any_of(row.begin(), row.end(), [](char f) { return f != 0; });
    rep.instance_failures += any;
    if (spec.harness.keep_trials) rep.instance_per_trial.push_back(any);
    for (std::size_t j = 0; j < row.size(); ++j) rep.copy_rates[j] += row[j];
  }
  for (auto& r : rep.copy_rates) r /= spec.trials;
  rep.instance_rate = static_cast<double>(rep.instance_failures) / spec.trials;
  rep.ci = clopper_pearson(rep.instance_failures, spec.trials);
  rep.bound = amplified_bound(rep.k, spec.N);
  rep.sigma = binomial_sigma(rep.bound, spec.trials);
  return rep;
}

inline AttackReport run_attack(const AttackSpec& spec) {
  const SubgraphCover cover = make_cover(spec.gadget);
  return run_attack(spec, make_victim(spec.victim, spec.gadget, cover.T, spec.c));
}

inline Json to_json(const AttackReport& r) {
  return Json{{"schema", kSchemaVersion},
              {"gadget", r.gadget},
              {"victim", r.victim},
              {"c", r.c},
              {"k", r.k},
              {"T", r.T},
              {"trials", r.trials},
              {"element_rates", r.element.rates},
              {"whole_gadget_rate", r.element.whole_rate},
              {"i_star", r.i_star},
              {"x_choice", "argmax"},
              {"N", r.N},
              {"instance_family", r.instance_family},
              {"instance_n", r.instance_n},
              {"instance_rate", r.instance_rate},
              {"instance_ci95", {r.ci.lo, r.ci.hi}},
              {"copy_rates", r.copy_rates},
              {"bound", r.bound},
              {"sigma", r.sigma},
              {"independence", "classical per-copy independence assumed"},
              {"locality_sound", r.locality_sound}};
}

}  // namespace lcol
