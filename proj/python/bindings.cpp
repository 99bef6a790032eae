#include "mwdisc/bounds.hpp"
#include "mwdisc/cli.hpp"
#include "mwdisc/clustering.hpp"
#include "mwdisc/discrepancy.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/report.hpp"
#include "mwdisc/spectrum.hpp"
#include "mwdisc/stepvec.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace mwdisc;

namespace {

DiscMode mode_of(const std::string& name) {
  if (name == "exact") return DiscMode::Exact;
  if (name == "heuristic") return DiscMode::Heuristic;
  throw Error(ErrorCode::InvalidArgument, "mode must be 'exact' or 'heuristic'");
}

DiscOptions options(std::uint64_t budget, bool disjoint_only, int restarts, std::uint64_t seed) {
  DiscOptions o;
  o.budget = budget;
  o.disjoint_only = disjoint_only;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

// Results cross the boundary as JSON text; the Python side turns them into dicts.
std::string text(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multiway discrepancy and singular value toolkit";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("svd", [](const Matrix& a) {
    const Spectrum s = svd_full(a);
    return py::make_tuple(s.values, s.left, s.right);
  }, py::arg("matrix"));

  m.def("normalized_spectrum", [](const Matrix& raw) {
    const Spectrum s = nontrivial_spectrum(normalize(ContingencyTable::build(raw)));
    return text(to_json(s));
  }, py::arg("table"));

  m.def("modularity_spectrum", [](const Matrix& w) {
    return text(to_json(normalized_modularity(WeightedGraph::make(w)).spectrum));
  }, py::arg("weights"));

  m.def("partition_discrepancy",
        [](const Matrix& raw, std::vector<int> row_labels, std::vector<int> col_labels, int k, const std::string& mode,
           std::uint64_t budget, bool disjoint_only, int restarts, std::uint64_t seed) {
          const auto table = ContingencyTable::build(raw);
          const auto p = PartitionPair::make(std::move(row_labels), std::move(col_labels), k);
          return text(to_json(partition_discrepancy(table, p, mode_of(mode), options(budget, disjoint_only, restarts, seed))));
        },
        py::arg("table"), py::arg("row_labels"), py::arg("col_labels"), py::arg("k"), py::arg("mode") = "exact",
        py::arg("budget") = std::uint64_t{1} << 24, py::arg("disjoint_only") = false, py::arg("restarts") = 20,
        py::arg("seed") = 0);

  m.def("min_disc",
        [](const Matrix& raw, int k, const std::string& mode, std::uint64_t budget, bool disjoint_only, int restarts,
           std::uint64_t seed) {
          const auto res = min_disc(ContingencyTable::build(raw), k, mode_of(mode), options(budget, disjoint_only, restarts, seed));
          return text({{"certificate", to_json(res.certificate)}, {"partition", to_json(res.partition)}});
        },
        py::arg("table"), py::arg("k"), py::arg("mode") = "exact", py::arg("budget") = std::uint64_t{1} << 24,
        py::arg("disjoint_only") = false, py::arg("restarts") = 20, py::arg("seed") = 0);

  m.def("spectral_clustering",
        [](const Matrix& raw, int k, bool graph, int restarts, std::uint64_t seed) {
          if (graph) return text(to_json(spectral_partition_pipeline(WeightedGraph::make(raw), k, restarts, seed)));
          return text(to_json(spectral_partition_pipeline(ContingencyTable::build(raw), k, restarts, seed)));
        },
        py::arg("matrix"), py::arg("k"), py::arg("graph") = false, py::arg("restarts") = 20, py::arg("seed") = 0);

  m.def("verify",
        [](const Matrix& raw, int k, bool graph, bool directed, const std::string& mode, std::uint64_t budget) {
          const DiscOptions o = options(budget, false, 20, 0);
          if (graph) return text(to_json(verify(WeightedGraph::make(raw, directed), k, mode_of(mode), o)));
          return text(to_json(verify(ContingencyTable::build(raw), k, mode_of(mode), o)));
        },
        py::arg("matrix"), py::arg("k"), py::arg("graph") = false, py::arg("directed") = false,
        py::arg("mode") = "exact", py::arg("budget") = std::uint64_t{1} << 24);

  m.def("trace",
        [](const Matrix& raw, std::vector<int> row_labels, std::vector<int> col_labels, int k) {
          const auto table = ContingencyTable::build(raw);
          const auto p = PartitionPair::make(std::move(row_labels), std::move(col_labels), k);
          return text(to_json(trace_theorem1(table, p)));
        },
        py::arg("table"), py::arg("row_labels"), py::arg("col_labels"), py::arg("k"));

  m.def("step_approx", [](const Vector& x, const Vector& d) {
    const StepVector y = step_approx(x, d);
    std::vector<std::tuple<Index, int, int>> terms;
    for (const StepTerm& t : y.terms) terms.emplace_back(t.index, t.j, t.ell);
    return py::make_tuple(Eigen::VectorXcd(y.entries), terms);
  }, py::arg("x"), py::arg("d"));

  m.def("theorem1_rhs", &theorem1_rhs, py::arg("alpha"), py::arg("k"));
  m.def("butler_rhs", &butler_rhs, py::arg("alpha"));
  m.def("relevance_threshold", &relevance_threshold, py::arg("k"));
  m.def("monotonicity_limit", &monotonicity_limit, py::arg("k"));

  m.def("block_table",
        [](Index m, Index n, int k, std::vector<double> rp, std::vector<double> cp, const Matrix& densities,
           double epsilon, std::uint64_t seed) {
          const PlantedTable t = block_table(m, n, k, rp, cp, densities, epsilon, seed);
          return py::make_tuple(t.raw, t.partition.row_labels(), t.partition.col_labels());
        },
        py::arg("m"), py::arg("n"), py::arg("k"), py::arg("row_proportions"), py::arg("col_proportions"),
        py::arg("densities"), py::arg("epsilon"), py::arg("seed") = 0);

  m.def("random_graph",
        [](Index n, std::vector<double> proportions, const Matrix& pattern, std::uint64_t seed) {
          const PlantedGraph g = generalized_random_graph(n, proportions, PatternMatrix::make(pattern), seed);
          return py::make_tuple(g.graph.weights(), g.labels, g.info.warnings);
        },
        py::arg("n"), py::arg("proportions"), py::arg("pattern"), py::arg("seed") = 0);

  m.def("biregular",
        [](Index n1, Index n2, Index k1, Index k2, std::uint64_t seed) {
          const PlantedGraph g = bipartite_biregular(n1, n2, k1, k2, seed);
          return py::make_tuple(g.graph.weights(), g.labels);
        },
        py::arg("n1"), py::arg("n2"), py::arg("k1"), py::arg("k2"), py::arg("seed") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
