#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "lcol/adversary.hpp"
#include "lcol/analysis.hpp"
#include "lcol/coloring.hpp"
#include "lcol/gadgets.hpp"
#include "lcol/generators.hpp"
#include "lcol/io.hpp"
#include "lcol/netdec.hpp"

namespace lcol::cli {
namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::BudgetExceeded: return kBudgetExceeded;
    case ErrorKind::BadParams:
    case ErrorKind::OutOfRange:
    case ErrorKind::SelfLoop:
    case ErrorKind::ParseError:
    case ErrorKind::EmptyGraph:
    case ErrorKind::SizeLimit:
    case ErrorKind::DoesNotFit:
    case ErrorKind::LocalityMismatch:
    case ErrorKind::TooLarge: return kBadArguments;
    default: return kValidationFailure;
  }
}

// Where results go: the -o file when given, otherwise `out`.
class Sink {
 public:
  Sink(std::ostream& fallback, const std::string& path) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::BadParams, "cannot write " + path);
      os_ = &file_;
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void emit_json(std::ostream& fallback, const std::string& path, const Json& j) {
  Sink s(fallback, path);
  s.get() << j.dump(2) << '\n';
}

void emit_graph(std::ostream& fallback, const std::string& path, const Graph& g) {
  Sink s(fallback, path);
  write_graph(s.get(), g);
  if (!path.empty() && g.has_labels()) {
    std::ofstream side(path + ".labels.json");
    side << labels_to_json(g).dump(2) << '\n';
  }
}

Mode parse_mode(const std::string& m) { return m == "det" ? Mode::Det : Mode::Rand; }

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size() || v < 1) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadParams, "bad size '" + part + "'");
    }
  }
  if (out.empty()) throw Error(ErrorKind::BadParams, "no sizes given");
  return out;
}

struct Options {
  // shared
  std::string output;
  std::string file;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultSolverBudget;
  int jobs = 1;
  // gen and gadgets
  int chi = 2, r = 3, k = 2, w = 0, hh = 0;
  NodeId n = 0;
  double p = 0.0;
  // color / decompose / bench
  int alpha = 2;
  std::string mode = "rand";
  std::string sizes = "16,24,32,48";
  // analyze
  bool chromatic = false, girth = false, parity = false;
  std::optional<int> local_r;
  // cover / attack
  std::string family, gadget, victim = "pipeline3", csv;
  bool verify = false;
  int copies = 1, trials = 100;
  std::optional<int> c;
};

int cmd_gen(const std::string& what, const Options& o, std::ostream& out) {
  Graph g;
  if (what == "rjoin")
    g = rjoin_gadget(o.chi, o.r, o.k);
  else if (what == "kb")
    g = kb_gadget(o.w, o.hh);
  else if (what == "grid")
    g = grid_graph(o.w, o.hh);
  else
    g = random_bipartite(o.n, o.p, o.seed);
  emit_graph(out, o.output, g);
  return kOk;
}

int cmd_color(const Options& o, std::ostream& out) {
  Graph g = read_graph_file(o.file);
  PipelineResult r = full_pipeline(g, o.alpha, parse_mode(o.mode), o.seed, o.budget);
  emit_json(out, o.output, to_json(r));
  const int bound = o.alpha * (r.chi_hat - 1) + 1;
  return r.proper && r.colors_used <= std::max(bound, 1) ? kOk : kValidationFailure;
}

int cmd_decompose(const Options& o, std::ostream& out) {
  Graph g = read_graph_file(o.file);
  NetworkDecomposition D = network_decomposition(g, o.alpha, base_of(parse_mode(o.mode)), o.seed);
  Json j = to_json(D);
  auto rep = verify_decomposition(g, D, o.alpha, D.d);
  j["verify"] = to_json(rep);
  emit_json(out, o.output, j);
  return rep.ok ? kOk : kValidationFailure;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  Graph g = read_graph_file(o.file);
  Json j{{"schema", kSchemaVersion}, {"n", g.node_count()}, {"m", g.edge_count()}, {"sha256", graph_sha256(g)}};
  int code = kOk;
  const bool kb_hint = o.w > 0 && o.hh > 0;
  if (kb_hint && graph_sha256(kb_gadget(o.w, o.hh)) != graph_sha256(g))
    throw Error(ErrorKind::BadParams, "--w/--hh do not describe this graph");
  if (o.girth) {
    auto gi = girth(g);
    j["girth"] = gi ? Json(*gi) : Json(nullptr);
  }
  if (o.parity) {
    if (!kb_hint) throw Error(ErrorKind::BadParams, "--parity needs --w and --hh of the Klein-bottle gadget");
    auto par = kb_parity(o.w, o.hh);
    Json edges = Json::array();
    for (const Edge& e : par.breaking) edges.push_back(Json(std::vector<NodeId>{e.first, e.second}));
    j["parity"] = par.odd ? "odd" : "even";
    j["breaking_edges"] = edges;
  }
  if (o.chromatic) {
    SolverOptions so;
    so.budget = o.budget;
    if (kb_hint) so.order_hint = kb_sweep_order(o.w, o.hh);
    auto b = chromatic_bracket(g, so);
    j["chromatic"] = b.exact() ? to_json(b.certificate) : Json{{"lower", b.lower}, {"upper", b.upper}};
    if (!b.exact()) code = kBudgetExceeded;
  }
  if (o.local_r) {
    auto lc = local_chromatic_number(g, *o.local_r, o.budget);
    j["local_chromatic"] = {{"r", *o.local_r}, {"value", lc.value}, {"argmax", lc.argmax}};
  }
  emit_json(out, o.output, j);
  return code;
}

int cmd_cover(const Options& o, std::ostream& out) {
  Graph host;
  SubgraphCover cover;
  int expected = 0;
  if (o.family == "rjoin") {
    host = rjoin_gadget(o.chi, o.r, o.k);
    cover = rjoin_cover(o.chi, o.r, o.k);
    expected = o.chi;
  } else {
    cover = kb_cover(o.w, o.hh);
    host = kb_gadget(o.w, o.hh);
    expected = 2;  // lattice patches are bipartite
  }
  Json j = to_json(cover);
  int code = kOk;
  if (o.verify) {
    auto rep = verify_cover(host, cover, expected);
    j["verify"] = to_json(rep);
    if (!rep.ok) code = kValidationFailure;
  }
  emit_json(out, o.output, j);
  return code;
}

int cmd_attack(const Options& o, std::ostream& out) {
  AttackSpec spec;
  if (o.gadget == "rjoin") {
    spec.gadget.kind = GadgetKind::RJoin;
    spec.gadget.chi = o.chi;
    spec.gadget.r = o.r;
    spec.gadget.k = o.k;
  } else {
    spec.gadget.kind = GadgetKind::KB;
    spec.gadget.W = o.w;
    spec.gadget.H = o.hh;
  }
  spec.victim = o.victim;
  spec.c = o.c;
  spec.N = o.copies;
  spec.trials = o.trials;
  spec.seed = o.seed;
  spec.harness.jobs = o.jobs;
  spec.harness.allow_global = o.victim == "honest";
  spec.harness.keep_trials = !o.csv.empty();
  AttackReport rep = run_attack(spec);
  emit_json(out, o.output, to_json(rep));
  if (!o.csv.empty()) {
    std::ofstream f(o.csv);
    if (!f) throw Error(ErrorKind::BadParams, "cannot write " + o.csv);
    f << "phase,trial,unit,failed\n";
    for (std::size_t t = 0; t < rep.element.per_trial.size(); ++t)
      for (std::size_t i = 0; i < rep.element.per_trial[t].size(); ++i)
        f << "gadget," << t << ',' << i + 1 << ',' << int(rep.element.per_trial[t][i]) << '\n';
    for (std::size_t t = 0; t < rep.instance_per_trial.size(); ++t)
      f << "instance," << t << ",all," << int(rep.instance_per_trial[t]) << '\n';
  }
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const auto sizes = parse_sizes(o.sizes);
  const Mode mode = parse_mode(o.mode);
  std::vector<PipelineResult> results(sizes.size());
  detail::parallel_trials(static_cast<int>(sizes.size()), o.jobs, [&](int i) {
    results[i] = full_pipeline(grid_graph(sizes[i], sizes[i]), o.alpha, mode, o.seed, o.budget);
  });
  Sink s(out, o.output);
  s.get() << "n,rounds,colors_used\n";
  for (const auto& r : results) s.get() << r.n << ',' << r.rounds.total() << ',' << r.colors_used << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local graph colouring toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_out = [&](CLI::App* sc) { sc->add_option("-o,--output", o.output, "Write the result to this file"); };
  auto add_seed = [&](CLI::App* sc) { sc->add_option("--seed", o.seed, "Master seed")->capture_default_str(); };
  auto add_budget = [&](CLI::App* sc) {
    sc->add_option("--budget", o.budget, "Solver expansion budget")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto add_file = [&](CLI::App* sc) { sc->add_option("FILE", o.file, "Graph file")->required(); };
  auto add_rjoin = [&](CLI::App* sc, bool required) {
    auto a = sc->add_option("--chi", o.chi, "Chromatic number of the base clique");
    auto b = sc->add_option("--r", o.r, "Join layers");
    auto c = sc->add_option("--k", o.k, "Nesting depth");
    if (required) a->required(), b->required(), c->required();
  };
  auto add_grid = [&](CLI::App* sc, bool required) {
    auto a = sc->add_option("--w", o.w, "Width");
    auto b = sc->add_option("--hh", o.hh, "Height");
    if (required) a->required(), b->required();
  };

  auto* gen = app.add_subcommand("gen", "Generate a graph");
  gen->require_subcommand(1);
  auto* gen_rjoin = gen->add_subcommand("rjoin", "Nested r-join gadget");
  add_rjoin(gen_rjoin, true);
  auto* gen_kb = gen->add_subcommand("kb", "Klein-bottle quadrangulation");
  add_grid(gen_kb, true);
  auto* gen_grid = gen->add_subcommand("grid", "Rectangular grid");
  add_grid(gen_grid, true);
  auto* gen_rb = gen->add_subcommand("random-bipartite", "Connected random bipartite graph");
  gen_rb->add_option("--n", o.n, "Nodes")->required();
  gen_rb->add_option("--p", o.p, "Edge probability")->required();
  add_seed(gen_rb);
  for (auto* sc : {gen_rjoin, gen_kb, gen_grid, gen_rb}) add_out(sc);

  auto* color = app.add_subcommand("color", "Colour a graph with the decomposition pipeline");
  auto* decompose = app.add_subcommand("decompose", "Network decomposition of a graph");
  for (auto* sc : {color, decompose}) {
    sc->add_option("--alpha", o.alpha, "Decomposition colours")->check(CLI::PositiveNumber)->capture_default_str();
    sc->add_option("--mode", o.mode, "Base clusterer")->check(CLI::IsMember({"det", "rand"}))->capture_default_str();
    add_seed(sc);
    add_out(sc);
    add_file(sc);
  }
  add_budget(color);

  auto* analyze = app.add_subcommand("analyze", "Exact graph facts");
  analyze->add_flag("--chromatic", o.chromatic, "Chromatic number with certificate");
  analyze->add_option("--local-chromatic", o.local_r, "Local chromatic number at this radius")
      ->check(CLI::NonNegativeNumber);
  analyze->add_flag("--girth", o.girth, "Shortest cycle length");
  analyze->add_flag("--parity", o.parity, "Klein-bottle face orientation parity (needs --w, --hh)");
  add_grid(analyze, false);
  add_budget(analyze);
  add_out(analyze);
  add_file(analyze);

  auto* cover = app.add_subcommand("cover", "Subgraph cover of a gadget");
  cover->add_option("--family", o.family, "Gadget family")->required()->check(CLI::IsMember({"rjoin", "kb"}));
  add_rjoin(cover, false);
  add_grid(cover, false);
  cover->add_flag("--verify", o.verify, "Check every cover clause");
  add_out(cover);

  auto* attack = app.add_subcommand("attack", "Failure amplification experiment");
  attack->add_option("--gadget", o.gadget, "Gadget family")->required()->check(CLI::IsMember({"rjoin", "kb"}));
  add_rjoin(attack, false);
  add_grid(attack, false);
  attack->add_option("--victim", o.victim, "Victim algorithm")
      ->check(CLI::IsMember({"pipeline3", "const1", "honest"}))
      ->capture_default_str();
  attack->add_option("--c", o.c, "Claimed colour count");
  attack->add_option("--copies", o.copies, "Copies N of the worst element")->check(CLI::PositiveNumber);
  attack->add_option("--trials", o.trials, "Trials per phase")->check(CLI::PositiveNumber);
  attack->add_option("--csv", o.csv, "Per-trial outcomes as CSV");
  add_seed(attack);
  add_out(attack);

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* scaling = bench->add_subcommand("scaling", "Pipeline rounds on square grids (CSV)");
  scaling->add_option("--alpha", o.alpha, "Decomposition colours")->check(CLI::PositiveNumber);
  scaling->add_option("--sizes", o.sizes, "Comma-separated grid sides")->capture_default_str();
  scaling->add_option("--mode", o.mode, "Base clusterer")->check(CLI::IsMember({"det", "rand"}));
  add_seed(scaling);
  add_budget(scaling);
  add_out(scaling);

  for (auto* sc : {attack, scaling})
    sc->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<std::string> argv_store{"lcol"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << '\n';
    return kBadArguments;
  }

  try {
    if (gen->parsed()) {
      for (auto* sc : gen->get_subcommands()) return cmd_gen(sc->get_name(), o, out);
    }
    if (color->parsed()) return cmd_color(o, out);
    if (decompose->parsed()) return cmd_decompose(o, out);
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (cover->parsed()) return cmd_cover(o, out);
    if (attack->parsed()) return cmd_attack(o, out);
    if (scaling->parsed()) return cmd_bench(o, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kValidationFailure;
  }
  return kBadArguments;
}

}  // namespace lcol::cli
