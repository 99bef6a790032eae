#include "mwdisc/bounds.hpp"

#include "mwdisc/clustering.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mwdisc {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::AlphaOutOfRange, "alpha=" + std::to_string(alpha) + " is outside [0, 1]");
  }
}

void check_k(int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
}

}  // namespace

double theorem1_rhs(double alpha, int k) {
  check_alpha(alpha);
  check_k(k);
  if (alpha == 0.0) return 0.0;
  return 9.0 * alpha * (k + 2.0 - 9.0 * k * std::log(alpha));
}

double butler_rhs(double alpha) {
  check_alpha(alpha);
  if (alpha == 0.0) return 0.0;
  return 150.0 * alpha * (1.0 - 8.0 * std::log(alpha));
}

double monotonicity_limit(int k) {
  check_k(k);
  return std::exp((2.0 - 8.0 * k) / (9.0 * k));
}

double relevance_threshold(int k) {
  double lo = 0.0;
  double hi = monotonicity_limit(k);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (theorem1_rhs(mid, k) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(BoundContext c) noexcept {
  switch (c) {
    case BoundContext::Table: return "table";
    case BoundContext::Undirected: return "undirected";
    case BoundContext::Directed: return "directed";
  }
  return "unknown";
}

namespace {

constexpr double kTol = 1e-9;

BoundReport assemble(int k, BoundContext context, double s_k, MinDiscResult disc) {
  BoundReport r;
  r.k = k;
  r.context = context;
  r.s_k = s_k;
  r.row_labels = disc.partition.row_labels();
  r.col_labels = disc.partition.col_labels();
  r.disc = std::move(disc.certificate);
  const double alpha = r.disc.alpha;
  r.theorem_rhs = theorem1_rhs(std::min(alpha, 1.0), k);
  if (k == 1) r.butler_rhs = butler_rhs(std::min(alpha, 1.0));
  r.threshold = relevance_threshold(k);
  r.guard_limit = monotonicity_limit(k);
  const bool holds = s_k <= r.theorem_rhs + kTol;
  switch (r.disc.exactness) {
    case Exactness::Exact:
      r.verdict = holds ? Verdict::Satisfied : Verdict::Violated;
      break;
    case Exactness::UpperBound:
      r.monotonicity_guard = alpha < r.guard_limit;
      if (*r.monotonicity_guard) {
        r.verdict = holds ? Verdict::Satisfied : Verdict::Violated;
      }
      break;
    default:
      // not an upper bound on disc_k, so nothing follows
      r.monotonicity_guard = false;
      break;
  }
  return r;
}

void attach_back(BoundReport& r, const PipelineResult& p) {
  r.back_estimate = p.back_estimate;
  if (p.back_estimate > 0.0) r.back_ratio = r.disc.alpha / p.back_estimate;
}

}  // namespace

BoundReport verify(const ContingencyTable& table, int k, DiscMode mode, const DiscOptions& options) {
  check_k(k);
  const double s_k = svd_full(normalize(table).values()).s(k);
  BoundReport r = assemble(k, BoundContext::Table, s_k, min_disc(table, k, mode, options));
  try {
    attach_back(r, spectral_partition_pipeline(table, k, std::max(options.restarts, 1), options.seed));
  } catch (const Error&) {
  }
  return r;
}

EmlCheck expander_mixing_check(const WeightedGraph& graph, DiscMode mode, const DiscOptions& options) {
  if (graph.directed()) throw Error(ErrorCode::InvalidArgument, "the mixing check needs an undirected graph");
  const ModularityDecomposition dec = normalized_modularity(graph);
  const ContingencyTable table = graph_as_table(graph);
  const PartitionPair whole = PartitionPair::shared(std::vector<int>(static_cast<std::size_t>(graph.size()), 0), 1);
  EmlCheck e;
  e.mu1 = dec.spectrum.s(1);
  DiscOptions opt = options;
  opt.disjoint_only = false;
  e.disc = partition_discrepancy(table, whole, mode, opt);
  opt.disjoint_only = true;
  e.disc_disjoint = partition_discrepancy(table, whole, mode, opt);
  e.holds = e.disc.alpha <= e.mu1 + kTol;
  e.holds_disjoint = e.disc_disjoint.alpha <= e.mu1 + kTol;
  return e;
}

BoundReport verify(const WeightedGraph& graph, int k, DiscMode mode, const DiscOptions& options) {
  check_k(k);
  const ContingencyTable table = graph_as_table(graph);
  if (graph.directed()) {
    if (!is_nondecomposable(table)) {
      throw Error(ErrorCode::DecomposableTable, "the weight table of the directed graph is decomposable");
    }
    const double s_k = svd_full(normalize(table).values()).s(k);
    DiscOptions opt = options;
    opt.shared_partition = false;
    BoundReport r = assemble(k, BoundContext::Directed, s_k, min_disc(table, k, mode, opt));
    try {
      attach_back(r, spectral_partition_pipeline(table, k, std::max(options.restarts, 1), options.seed));
    } catch (const Error&) {
    }
    return r;
  }
  const ModularityDecomposition dec = normalized_modularity(graph);
  DiscOptions opt = options;
  opt.shared_partition = true;
  BoundReport r = assemble(k, BoundContext::Undirected, dec.spectrum.s(k), min_disc(table, k, mode, opt));
  if (k == 1) r.eml = expander_mixing_check(graph, mode, options);
  try {
    attach_back(r, spectral_partition_pipeline(graph, k, std::max(options.restarts, 1), options.seed));
  } catch (const Error&) {
  }
  return r;
}

}  // namespace mwdisc
