#pragma once

#include "mwdisc/discrepancy.hpp"
#include "mwdisc/table.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace mwdisc {

/// 9 alpha (k + 2 - 9k ln alpha), 0 at alpha = 0. Throws AlphaOutOfRange
/// outside [0, 1].
double theorem1_rhs(double alpha, int k);

/// 150 alpha (1 - 8 ln alpha), 0 at alpha = 0. Throws AlphaOutOfRange
/// outside [0, 1].
double butler_rhs(double alpha);

/// e^{(2 - 8k) / (9k)}: theorem1_rhs is strictly increasing below it.
double monotonicity_limit(int k);

/// Root of theorem1_rhs(alpha, k) = 1 below monotonicity_limit(k), by
/// bisection to 1e-12.
double relevance_threshold(int k);

enum class Verdict { Satisfied, Violated, Inconclusive };
enum class BoundContext { Table, Undirected, Directed };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(BoundContext c) noexcept;

/// disc_1 <= |mu_1| for an undirected graph, over all (X, Y) and over
/// disjoint pairs only.
struct EmlCheck {
  double mu1 = 0.0;
  DiscrepancyCertificate disc;
  DiscrepancyCertificate disc_disjoint;
  bool holds = false;
  bool holds_disjoint = false;
};

struct BoundReport {
  int k = 1;
  BoundContext context = BoundContext::Table;
  double s_k = 0.0;
  DiscrepancyCertificate disc;
  std::vector<int> row_labels;
  std::vector<int> col_labels;
  double theorem_rhs = 0.0;
  std::optional<double> butler_rhs;  ///< k = 1 only
  double threshold = 0.0;            ///< relevance_threshold(k)
  double guard_limit = 0.0;          ///< monotonicity_limit(k)
  /// Set when disc is only an upper bound: whether it lies in the regime
  /// where the right-hand side is increasing.
  std::optional<bool> monotonicity_guard;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<EmlCheck> eml;
  /// sqrt(2k) (S_row + S_col) + s_k from spectral clustering, and disc / it.
  std::optional<double> back_estimate;
  std::optional<double> back_ratio;

  bool satisfied() const { return verdict == Verdict::Satisfied; }
};

/// Checks s_k <= theorem1_rhs(disc_k, k) for a table.
BoundReport verify(const ContingencyTable& table, int k, DiscMode mode, const DiscOptions& options = {});

/// Undirected graphs use |mu_k| and a shared vertex partition, plus the
/// mixing check when k = 1. Directed graphs are read as their weight table.
BoundReport verify(const WeightedGraph& graph, int k, DiscMode mode, const DiscOptions& options = {});

/// The k = 1 mixing check alone. Requires a connected undirected graph.
EmlCheck expander_mixing_check(const WeightedGraph& graph, DiscMode mode, const DiscOptions& options = {});

}  // namespace mwdisc
