#include "mwdisc/cli.hpp"

#include "mwdisc/bounds.hpp"
#include "mwdisc/clustering.hpp"
#include "mwdisc/discrepancy.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/io.hpp"
#include "mwdisc/random.hpp"
#include "mwdisc/report.hpp"
#include "mwdisc/stepvec.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <optional>
#include <ostream>

#ifndef MWDISC_VERSION
#define MWDISC_VERSION "0.0.0"
#endif

namespace mwdisc {

namespace {

constexpr double kSlackTol = 1e-9;

struct Options {
  std::string input;
  std::string graph;
  std::string format = "csv";
  std::string out;
  bool directed = false;
  std::uint64_t seed = 0;
  int k = 1;
  std::string mode = "exact";
  std::uint64_t budget = std::uint64_t{1} << 24;
  int restarts = 20;
  bool disjoint_only = false;
  std::optional<Index> top;
  bool weak = false;
  int count = 20;
  // gen
  std::string model;
  Index n = 0, m = 0, n1 = 0, n2 = 0, k1 = 0, k2 = 0;
  std::string proportions, row_proportions, col_proportions, pattern, densities;
  double epsilon = 0.0;
  std::string instance;
};

struct Outcome {
  Json payload;
  std::optional<Inequality> violation;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string field = text.substr(start, end - start);
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    while (!field.empty() && field.back() == ' ') field.pop_back();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": '" + field + "' is not a number");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

Matrix parse_rows(const std::string& text, const char* what) {
  std::vector<std::vector<double>> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    rows.push_back(parse_list(text.substr(start, end - start), what));
    if (rows.back().size() != rows.front().size()) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": rows differ in length");
    }
    start = end + 1;
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

DiscMode disc_mode(const std::string& s) {
  if (s == "exact") return DiscMode::Exact;
  if (s == "heuristic") return DiscMode::Heuristic;
  throw Error(ErrorCode::InvalidArgument, "mode must be exact or heuristic");
}

DiscOptions disc_options(const Options& o) {
  DiscOptions d;
  d.budget = o.budget;
  d.restarts = o.restarts;
  d.seed = o.seed;
  d.disjoint_only = o.disjoint_only;
  return d;
}

Matrix load_raw(const std::string& path, const Options& o) {
  return parse_matrix(path, parse_format(o.format));
}

bool has_graph(const Options& o) {
  if (o.input.empty() == o.graph.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --input or --graph");
  }
  return !o.graph.empty();
}

WeightedGraph load_graph(const Options& o) { return WeightedGraph::make(load_raw(o.graph, o), o.directed); }

ContingencyTable load_table(const Options& o) { return ContingencyTable::build(load_raw(o.input, o)); }

Outcome cmd_validate(const Options& o) {
  Outcome r;
  if (has_graph(o)) {
    const WeightedGraph g = load_graph(o);
    const bool connected = g.is_connected();
    r.payload = {{"kind", "graph"},
                 {"vertices", g.size()},
                 {"directed", g.directed()},
                 {"connected", connected},
                 {"total_weight", g.weights().sum()},
                 {"degrees", to_json(Vector(g.degrees()))}};
    if (!connected) r.violation = Inequality{"connected", 1.0, 0.0, 1};
    return r;
  }
  const ContingencyTable t = ContingencyTable::build(load_raw(o.input, o), Construction::Lenient);
  const bool nd = is_nondecomposable(t);
  r.payload = {{"kind", "table"},
               {"rows", t.rows()},
               {"cols", t.cols()},
               {"total", t.scale()},
               {"nondecomposable", nd},
               {"row_sums", to_json(t.row_sums())},
               {"col_sums", to_json(t.col_sums())}};
  if (!nd) r.violation = Inequality{"nondecomposable", 1.0, 0.0, 1};
  return r;
}

Outcome cmd_svd(const Options& o) {
  Outcome r;
  if (has_graph(o)) {
    const WeightedGraph g = load_graph(o);
    if (!g.directed()) {
      const ModularityDecomposition d = normalized_modularity(g);
      r.payload = {{"kind", "modularity"}, {"spectrum", to_json(d.spectrum, o.top)}, {"identity_residual", d.identity_residual}};
      return r;
    }
    r.payload = {{"kind", "directed"}, {"spectrum", to_json(nontrivial_spectrum(normalize(graph_as_table(g))), o.top)}};
    return r;
  }
  r.payload = {{"kind", "table"}, {"spectrum", to_json(nontrivial_spectrum(normalize(load_table(o))), o.top)}};
  return r;
}

// Table to run discrepancy on, plus whether one vertex partition is shared.
std::pair<ContingencyTable, bool> subject(const Options& o) {
  if (has_graph(o)) {
    const WeightedGraph g = load_graph(o);
    return {graph_as_table(g), !g.directed()};
  }
  if (o.disjoint_only) {
    const ContingencyTable t = load_table(o);
    if (t.rows() != t.cols()) throw Error(ErrorCode::InvalidArgument, "--disjoint-only needs a square table");
    return {t, false};
  }
  return {load_table(o), false};
}

Outcome cmd_disc(const Options& o) {
  auto [table, shared] = subject(o);
  DiscOptions d = disc_options(o);
  d.shared_partition = shared;
  const MinDiscResult res = min_disc(table, o.k, disc_mode(o.mode), d);
  return {{{"k", o.k}, {"mode", o.mode}, {"certificate", to_json(res.certificate)}, {"partition", to_json(res.partition)}}, {}};
}

Outcome cmd_cluster(const Options& o) {
  if (has_graph(o)) {
    const WeightedGraph g = load_graph(o);
    if (!g.directed()) return {{{"k", o.k}, {"kind", "undirected"}, {"result", to_json(spectral_partition_pipeline(g, o.k, o.restarts, o.seed))}}, {}};
    return {{{"k", o.k}, {"kind", "directed"}, {"result", to_json(spectral_partition_pipeline(graph_as_table(g), o.k, o.restarts, o.seed))}}, {}};
  }
  return {{{"k", o.k}, {"kind", "table"}, {"result", to_json(spectral_partition_pipeline(load_table(o), o.k, o.restarts, o.seed))}}, {}};
}

std::optional<Inequality> eml_violation(const EmlCheck& e) {
  if (e.disc.exactness == Exactness::Exact && !e.holds) return Inequality{"eml", e.disc.alpha, e.mu1, 1};
  if (e.disc_disjoint.exactness == Exactness::Exact && !e.holds_disjoint) {
    return Inequality{"eml_disjoint", e.disc_disjoint.alpha, e.mu1, 1};
  }
  return std::nullopt;
}

Outcome cmd_bound(const Options& o) {
  const DiscMode mode = disc_mode(o.mode);
  const DiscOptions d = disc_options(o);
  const BoundReport rep = has_graph(o) ? verify(load_graph(o), o.k, mode, d) : verify(load_table(o), o.k, mode, d);
  Outcome r;
  r.payload = {{"report", to_json(rep)}};
  Json thresholds = Json::object();
  for (int k = 1; k <= 3; ++k) thresholds[std::to_string(k)] = relevance_threshold(k);
  r.payload["relevance_thresholds"] = thresholds;
  if (rep.verdict == Verdict::Violated) r.violation = Inequality{"theorem", rep.s_k, rep.theorem_rhs, 1};
  if (!r.violation && rep.eml) r.violation = eml_violation(*rep.eml);
  return r;
}

Outcome cmd_trace(const Options& o) {
  auto [table, shared] = subject(o);
  DiscOptions d = disc_options(o);
  d.shared_partition = shared;
  const MinDiscResult search = min_disc(table, o.k, disc_mode(o.mode), d);
  const ProofTrace t = trace_theorem1(table, search.partition, o.budget);
  Outcome r;
  r.payload = {{"k", o.k}, {"partition", to_json(search.partition)}, {"search", to_json(search.certificate)}, {"trace", to_json(t)}};
  if (o.weak) r.payload["weak"] = to_json(weak_bound_replay(table, search.partition, o.budget));
  if (const Inequality* w = t.worst(); w && w->slack() < -kSlackTol) r.violation = *w;
  return r;
}

// Connected graph on n vertices, each pair joined with probability 1/2 and
// weight uniform on [0.1, 1].
WeightedGraph random_connected_graph(Index n, Rng& rng) {
  while (true) {
    Matrix w = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        if (rng.bernoulli(0.5)) w(i, j) = w(j, i) = rng.uniform(0.1, 1.0);
      }
    }
    WeightedGraph g = WeightedGraph::make(std::move(w));
    if (g.is_connected()) return g;
  }
}

Outcome cmd_eml(const Options& o) {
  const DiscMode mode = disc_mode(o.mode);
  const DiscOptions d = disc_options(o);
  Outcome r;
  if (!o.graph.empty()) {
    const WeightedGraph g = load_graph(o);
    const EmlCheck e = expander_mixing_check(g, mode, d);
    r.payload = {{"instances", Json::array({to_json(e)})}};
    r.violation = eml_violation(e);
    return r;
  }
  if (!o.input.empty()) throw Error(ErrorCode::InvalidArgument, "eml reads graphs; use --graph");
  const Index n = o.n > 0 ? o.n : 8;
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "--n must be at least 2");
  Rng rng(o.seed);
  Json list = Json::array();
  bool all = true;
  for (int i = 0; i < o.count; ++i) {
    const EmlCheck e = expander_mixing_check(random_connected_graph(n, rng), mode, d);
    list.push_back(to_json(e));
    if (!r.violation) r.violation = eml_violation(e);
    all = all && e.holds && e.holds_disjoint;
  }
  r.payload = {{"n", n}, {"count", o.count}, {"all_hold", all}, {"instances", list}};
  return r;
}

std::vector<double> proportions_or_uniform(const std::string& text, int k, const char* what) {
  if (text.empty()) return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
  return parse_list(text, what);
}

Outcome cmd_gen(const Options& o) {
  Outcome r;
  Matrix matrix;
  Json labels;
  GeneratorInfo info;
  if (o.model == "grg") {
    if (o.pattern.empty()) throw Error(ErrorCode::InvalidArgument, "grg needs --pattern");
    const PatternMatrix p = PatternMatrix::make(parse_rows(o.pattern, "--pattern"));
    const PlantedGraph g = generalized_random_graph(o.n, proportions_or_uniform(o.proportions, p.k(), "--proportions"), p, o.seed);
    matrix = g.graph.weights();
    labels = {{"labels", g.labels}};
    info = g.info;
  } else if (o.model == "biregular") {
    const PlantedGraph g = bipartite_biregular(o.n1, o.n2, o.k1, o.k2, o.seed);
    matrix = g.graph.weights();
    labels = {{"labels", g.labels}};
    info = g.info;
  } else if (o.model == "block") {
    Matrix dens;
    if (o.densities.empty()) {
      dens = Matrix::Constant(o.k, o.k, 1.0);
      dens.diagonal().setConstant(4.0);
    } else {
      dens = parse_rows(o.densities, "--densities");
    }
    const PlantedTable t = block_table(o.m, o.n, o.k, proportions_or_uniform(o.row_proportions, o.k, "--row-proportions"),
                                       proportions_or_uniform(o.col_proportions, o.k, "--col-proportions"), dens,
                                       o.epsilon, o.seed);
    matrix = t.raw;
    labels = {{"row_labels", t.partition.row_labels()}, {"col_labels", t.partition.col_labels()}};
    info = t.info;
  } else {
    throw Error(ErrorCode::InvalidArgument, "--model must be grg, biregular or block");
  }
  r.payload = {{"generator", to_json(info)}, {"planted", labels}, {"rows", matrix.rows()}, {"cols", matrix.cols()}};
  if (!o.instance.empty()) {
    write_file_atomic(o.instance, format_matrix(matrix, parse_format(o.format)));
    r.payload["instance"] = o.instance;
  } else {
    r.payload["matrix"] = to_json(matrix);
  }
  return r;
}

void add_io(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "table file");
  sub->add_option("--graph", o.graph, "graph weight matrix file");
  sub->add_option("--format", o.format, "csv or mm")->check(CLI::IsMember({"csv", "mm", "matrixmarket"}));
  sub->add_flag("--directed", o.directed, "read --graph as directed");
  sub->add_option("--out", o.out, "write the report here instead of standard output");
  sub->add_option("--seed", o.seed, "random seed");
}

void add_disc(CLI::App* sub, Options& o) {
  sub->add_option("--k", o.k, "number of clusters")->check(CLI::PositiveNumber);
  sub->add_option("--mode", o.mode, "exact or heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
  sub->add_option("--budget", o.budget, "enumeration budget per cluster pair");
  sub->add_option("--restarts", o.restarts, "heuristic restarts")->check(CLI::PositiveNumber);
  sub->add_flag("--disjoint-only", o.disjoint_only, "only count disjoint X, Y");
}

Json parameters_of(const CLI::App* sub) {
  Json p = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    std::string name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    if (name == "help" || name == "out") continue;
    std::string value;
    for (const std::string& s : opt->results()) value += (value.empty() ? "" : ",") + s;
    p[name] = value;
  }
  return p;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Multiway discrepancy and singular value toolkit", "mwdisc"};
  app.set_version_flag("--version", MWDISC_VERSION);
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check a table or graph");
  add_io(validate, o);
  auto* svd = app.add_subcommand("svd", "normalized spectrum");
  add_io(svd, o);
  svd->add_option("--top", o.top, "number of values to report");
  auto* disc = app.add_subcommand("disc", "minimum k-way discrepancy");
  add_io(disc, o);
  add_disc(disc, o);
  auto* cluster = app.add_subcommand("cluster", "spectral clustering");
  add_io(cluster, o);
  cluster->add_option("--k", o.k, "number of clusters")->check(CLI::PositiveNumber);
  cluster->add_option("--restarts", o.restarts, "k-means restarts")->check(CLI::PositiveNumber);
  auto* bound = app.add_subcommand("bound", "check s_k against the discrepancy bound");
  add_io(bound, o);
  add_disc(bound, o);
  auto* trace = app.add_subcommand("trace", "replay every inequality of the bound");
  add_io(trace, o);
  add_disc(trace, o);
  trace->add_flag("--weak", o.weak, "also replay the size-dependent bound");
  auto* eml = app.add_subcommand("eml", "mixing check disc_1 <= |mu_1|");
  add_io(eml, o);
  add_disc(eml, o);
  eml->add_option("--count", o.count, "random graphs when no --graph is given")->check(CLI::PositiveNumber);
  eml->add_option("--n", o.n, "vertices per random graph");
  auto* gen = app.add_subcommand("gen", "generate a planted instance");
  gen->add_option("--model", o.model, "grg, biregular or block")->required()->check(CLI::IsMember({"grg", "biregular", "block"}));
  gen->add_option("--seed", o.seed, "random seed");
  gen->add_option("--out", o.out, "write the report here instead of standard output");
  gen->add_option("--instance", o.instance, "write the generated matrix here");
  gen->add_option("--format", o.format, "instance format, csv or mm")->check(CLI::IsMember({"csv", "mm", "matrixmarket"}));
  gen->add_option("--n", o.n, "vertices (grg) or columns (block)");
  gen->add_option("--m", o.m, "rows (block)");
  gen->add_option("--k", o.k, "clusters (block)");
  gen->add_option("--proportions", o.proportions, "cluster proportions, comma separated (grg)");
  gen->add_option("--pattern", o.pattern, "edge probabilities, rows separated by ';' (grg)");
  gen->add_option("--n1", o.n1, "first side size (biregular)");
  gen->add_option("--n2", o.n2, "second side size (biregular)");
  gen->add_option("--k1", o.k1, "first side degree (biregular)");
  gen->add_option("--k2", o.k2, "second side degree (biregular)");
  gen->add_option("--row-proportions", o.row_proportions, "row cluster proportions (block)");
  gen->add_option("--col-proportions", o.col_proportions, "column cluster proportions (block)");
  gen->add_option("--densities", o.densities, "k x k block densities, rows separated by ';' (block)");
  gen->add_option("--epsilon", o.epsilon, "multiplicative noise level (block)");

  std::vector<std::string> argv_store{"mwdisc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());

  Json report = {{"schema_version", kSchemaVersion}};
  auto emit = [&](const std::string& status, int code) {
    report["status"] = status;
    const std::string text = dump_json(report);
    if (!o.out.empty()) {
      try {
        write_file_atomic(o.out, text);
      } catch (const Error& e) {
        err << e.what() << '\n';
        return static_cast<int>(kExitUsage);
      }
    } else {
      out << text;
    }
    return code;
  };

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << MWDISC_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    report["command"] = {{"name", nullptr}, {"version", MWDISC_VERSION}};
    report["error"] = {{"code", "Usage"}, {"message", e.what()}};
    o.out.clear();
    return emit("error", kExitUsage);
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  report["command"] = {{"name", name}, {"parameters", parameters_of(sub)}, {"seed", o.seed}, {"version", MWDISC_VERSION}};

  const auto start = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    Outcome res;
    if (name == "validate") res = cmd_validate(o);
    else if (name == "svd") res = cmd_svd(o);
    else if (name == "disc") res = cmd_disc(o);
    else if (name == "cluster") res = cmd_cluster(o);
    else if (name == "bound") res = cmd_bound(o);
    else if (name == "trace") res = cmd_trace(o);
    else if (name == "eml") res = cmd_eml(o);
    else res = cmd_gen(o);
    report["payload"] = std::move(res.payload);
    report["error"] = nullptr;
    if (res.violation) {
      const Inequality& v = *res.violation;
      report["violation"] = to_json(v);
      report["timing"] = {{"seconds", seconds()}};
      err << "violated: " << v.name << " (slack " << v.slack() << ")\n";
      return emit("violated", kExitViolated);
    }
    report["timing"] = {{"seconds", seconds()}};
    return emit("ok", kExitOk);
  } catch (const Error& e) {
    report["payload"] = nullptr;
    report["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    report["timing"] = {{"seconds", seconds()}};
    err << e.what() << '\n';
    const bool assertion = e.code() == ErrorCode::ApproximationFailed;
    return emit(assertion ? "violated" : "error", assertion ? kExitViolated : kExitUsage);
  } catch (const std::exception& e) {
    report["payload"] = nullptr;
    report["error"] = {{"code", "Internal"}, {"message", e.what()}};
    report["timing"] = {{"seconds", seconds()}};
    err << e.what() << '\n';
    return emit("error", kExitUsage);
  }
}

}  // namespace mwdisc
