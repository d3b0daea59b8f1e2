#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lcol/graph.hpp"
#include "lcol/io.hpp"
#include "lcol/ledger.hpp"
#include "lcol/rng.hpp"

namespace lcol {

// What a node knows before the first round.
struct NodeContext {
  NodeId index = 0;  // position in the simulator, not visible to real algorithms
  std::uint64_t id = 0;
  int degree = 0;
  std::string input;
  Rng rng{0};
};

// Ports are numbered by ascending neighbour index.
template <class P>
concept NodeProgram = requires(const P& p, typename P::State& s, const typename P::State& cs, NodeContext ctx,
                               int round, std::span<const typename P::Message> inbox) {
  typename P::State;
  typename P::Message;
  typename P::Output;
  { p.init(ctx) } -> std::same_as<typename P::State>;
  { p.send(cs, round) } -> std::same_as<std::vector<typename P::Message>>;
  { p.receive(s, round, inbox) } -> std::same_as<void>;
  { p.output(cs) } -> std::same_as<std::optional<typename P::Output>>;
};

template <class Out>
struct SyncResult {
  std::vector<Out> outputs;
  int rounds = 0;  // first round after which every node had an output
};

struct SyncOptions {
  std::vector<std::uint64_t> ids;      // default: identity
  std::vector<std::string> inputs;     // default: empty labels
  std::ostream* trace = nullptr;       // JSON lines when set
};

namespace detail {

template <class M>
std::size_t payload_size(const M& m) {
  if constexpr (requires { m.size(); })
    return m.size();
  else
    return sizeof(M);
}

}  // namespace detail

// Lockstep execution. A node's output is fixed the first time it reports one;
// halted nodes keep participating so neighbours still hear from them.
template <NodeProgram P>
SyncResult<typename P::Output> run_sync(const Graph& g, const P& prog, int max_rounds, std::uint64_t seed,
                                        const SyncOptions& opt = {}) {
  if (max_rounds < 0) throw Error(ErrorKind::BadParams, "max_rounds must be >= 0");
  const NodeId n = g.node_count();
  if (!opt.ids.empty() && opt.ids.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::BadParams, "id list has the wrong length");
  if (!opt.inputs.empty() && opt.inputs.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::BadParams, "input list has the wrong length");
  if (!opt.ids.empty() && std::set<std::uint64_t>(opt.ids.begin(), opt.ids.end()).size() != opt.ids.size())
    throw Error(ErrorKind::BadParams, "ids are not distinct");

  using State = typename P::State;
  using Msg = typename P::Message;
  using Out = typename P::Output;
  std::vector<State> state;
  state.reserve(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) {
    NodeContext ctx;
    ctx.index = v;
    ctx.id = opt.ids.empty() ? static_cast<std::uint64_t>(v) : opt.ids[v];
    ctx.degree = g.degree(v);
    if (!opt.inputs.empty()) ctx.input = opt.inputs[v];
    ctx.rng = Rng(derive_seed(seed, {ctx.id}));
    state.push_back(prog.init(ctx));
  }

  std::vector<std::optional<Out>> out(static_cast<std::size_t>(n));
  NodeId pending = n;
  auto collect = [&](int round) {
    for (NodeId v = 0; v < n; ++v) {
      if (out[v]) continue;
      if (auto o = prog.output(state[v])) {
        out[v] = std::move(o);
        --pending;
        if (opt.trace) *opt.trace << Json{{"round", round}, {"node", v}, {"action", "output"}, {"payload_size", 0}}.dump() << '\n';
      }
    }
  };
  collect(0);

  // Port of v at w: position of v in w's sorted adjacency.
  auto port_of = [&](NodeId w, NodeId v) {
    auto nb = g.neighbors(w);
    return static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), v) - nb.begin());
  };

  int round = 0;
  std::vector<std::vector<Msg>> outbox(static_cast<std::size_t>(n)), inbox(static_cast<std::size_t>(n));
  while (pending > 0 && round < max_rounds) {
    ++round;
    for (NodeId v = 0; v < n; ++v) {
      outbox[v] = prog.send(state[v], round);
      if (outbox[v].size() != static_cast<std::size_t>(g.degree(v)))
        throw Error(ErrorKind::BadParams, "program must send one message per port");
      if (opt.trace)
        for (const Msg& m : outbox[v])
          *opt.trace << Json{{"round", round}, {"node", v}, {"action", "send"}, {"payload_size", detail::payload_size(m)}}.dump()
                     << '\n';
    }
    for (NodeId w = 0; w < n; ++w) {
      auto nb = g.neighbors(w);
      inbox[w].clear();
      for (NodeId v : nb) inbox[w].push_back(outbox[v][port_of(v, w)]);
    }
    for (NodeId v = 0; v < n; ++v) prog.receive(state[v], round, std::span<const Msg>(inbox[v]));
    collect(round);
  }
  if (pending > 0)
    throw Error(ErrorKind::NotHalted, std::to_string(pending) + " nodes without output after " +
                                          std::to_string(max_rounds) + " rounds");
  SyncResult<Out> res;
  res.rounds = round;
  res.outputs.reserve(out.size());
  for (auto& o : out) res.outputs.push_back(std::move(*o));
  return res;
}

// ---------------------------------------------------------------------------
// Demonstration programs

// Outputs its degree before any communication.
struct DegreeProgram {
  struct State {
    int degree;
  };
  using Message = int;
  using Output = int;
  State init(const NodeContext& c) const { return {c.degree}; }
  std::vector<Message> send(const State& s, int) const { return std::vector<Message>(static_cast<std::size_t>(s.degree), 0); }
  void receive(State&, int, std::span<const Message>) const {}
  std::optional<Output> output(const State& s) const { return s.degree; }
};

// Floods known ids for `radius` rounds and outputs the size of its ball.
struct BallSizeProgram {
  int radius = 1;
  struct State {
    int degree;
    int round = 0;
    std::vector<std::uint64_t> known;
  };
  using Message = std::vector<std::uint64_t>;
  using Output = int;
  State init(const NodeContext& c) const { return {c.degree, 0, {c.id}}; }
  std::vector<Message> send(const State& s, int) const { return std::vector<Message>(static_cast<std::size_t>(s.degree), s.known); }
  void receive(State& s, int round, std::span<const Message> in) const {
    for (const auto& m : in) s.known.insert(s.known.end(), m.begin(), m.end());
    std::sort(s.known.begin(), s.known.end());
    s.known.erase(std::unique(s.known.begin(), s.known.end()), s.known.end());
    s.round = round;
  }
  std::optional<Output> output(const State& s) const {
    if (s.round < radius) return std::nullopt;
    return static_cast<int>(s.known.size());
  }
};

// 2-colouring by BFS-distance parity from the node whose input is "root".
struct BfsParityProgram {
  struct State {
    int degree;
    int dist = -1;
  };
  using Message = int;  // sender's distance, or -1
  using Output = int;   // 1 or 2
  State init(const NodeContext& c) const { return {c.degree, c.input == "root" ? 0 : -1}; }
  std::vector<Message> send(const State& s, int) const { return std::vector<Message>(static_cast<std::size_t>(s.degree), s.dist); }
  void receive(State& s, int, std::span<const Message> in) const {
    if (s.dist >= 0) return;
    for (int d : in)
      if (d >= 0 && (s.dist < 0 || d + 1 < s.dist)) s.dist = d + 1;
  }
  std::optional<Output> output(const State& s) const {
    if (s.dist < 0) return std::nullopt;
    return 1 + s.dist % 2;
  }
};

// Gathers every edge it hears about for `radius` rounds, then outputs a
// digest of that view mixed with one private random draw.
struct ViewDigestProgram {
  int radius = 1;
  struct State {
    std::uint64_t id;
    int degree;
    int round = 0;
    std::uint64_t coin;
    std::vector<std::uint64_t> ids;                          // self plus everything heard
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;  // learned edges
  };
  struct Message {
    std::uint64_t from;
    std::vector<std::uint64_t> ids;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    std::size_t size() const { return ids.size() + 2 * edges.size(); }
  };
  using Output = std::uint64_t;
  State init(NodeContext c) const { return {c.id, c.degree, 0, c.rng.next_u64(), {c.id}, {}}; }
  std::vector<Message> send(const State& s, int) const {
    return std::vector<Message>(static_cast<std::size_t>(s.degree), Message{s.id, s.ids, s.edges});
  }
  void receive(State& s, int round, std::span<const Message> in) const {
    for (const auto& m : in) {
      s.edges.emplace_back(std::min(s.id, m.from), std::max(s.id, m.from));
      s.ids.insert(s.ids.end(), m.ids.begin(), m.ids.end());
      s.edges.insert(s.edges.end(), m.edges.begin(), m.edges.end());
    }
    std::sort(s.ids.begin(), s.ids.end());
    s.ids.erase(std::unique(s.ids.begin(), s.ids.end()), s.ids.end());
    std::sort(s.edges.begin(), s.edges.end());
    s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
    s.round = round;
  }
  std::optional<Output> output(const State& s) const {
    if (s.round < radius) return std::nullopt;
    std::uint64_t h = mix64(s.coin);
    for (auto x : s.ids) h = mix64(h ^ x);
    for (auto [a, b] : s.edges) h = mix64(mix64(h ^ a) ^ b);
    return h;
  }
};

}  // namespace lcol
