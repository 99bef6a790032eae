#pragma once

#include "mwdisc/partition.hpp"
#include "mwdisc/table.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace mwdisc {

enum class Exactness {
  Exact,              ///< true maximum (or minimum) by enumeration
  HeuristicLower,     ///< feasible witness, lower bound on the pair maximum
  HeuristicEstimate,  ///< heuristic pairs inside a heuristic partition search
  UpperBound,         ///< exact partition discrepancy of a searched partition: >= disc_k
};

std::string_view to_string(Exactness e) noexcept;

struct DiscrepancyWitness {
  int a = 0;  ///< row cluster
  int b = 0;  ///< column cluster
  std::vector<Index> rows;  ///< X, a subset of R_a
  std::vector<Index> cols;  ///< Y, a subset of C_b
};

struct DiscrepancyCertificate {
  double alpha = 0.0;
  DiscrepancyWitness witness;
  Exactness exactness = Exactness::Exact;
};

enum class DiscMode { Exact, Heuristic };

struct DiscOptions {
  /// Maximum number of (X, Y) pairs enumerated per cluster pair.
  std::uint64_t budget = std::uint64_t{1} << 24;
  /// Maximum number of (row partition, column partition) pairs for exact min_disc.
  std::uint64_t partition_budget = std::uint64_t{1} << 20;
  /// Only count X, Y with no index in common (square tables; graph reading).
  bool disjoint_only = false;
  /// min_disc: use one vertex partition for both axes (undirected graphs).
  bool shared_partition = false;
  int restarts = 20;
  std::uint64_t seed = 0;
};

/// |c(X,Y) - rho(R_a,C_b) Vol(X) Vol(Y)| / sqrt(Vol(X) Vol(Y)).
///
/// Throws EmptySubset or SubsetOutsideCluster.
double pair_term(const ContingencyTable& table, const IndexSubset& cluster_rows,
                 const IndexSubset& cluster_cols, const IndexSubset& x, const IndexSubset& y);

/// Exhaustive maximum of pair_term over nonempty X in R_a, Y in C_b.
/// Throws BudgetExceeded when 2^|R_a| * 2^|C_b| exceeds options.budget.
DiscrepancyCertificate pair_discrepancy_exact(const ContingencyTable& table,
                                              const IndexSubset& cluster_rows,
                                              const IndexSubset& cluster_cols,
                                              const DiscOptions& options = {});

/// Alternating prefix sweep from random starting column sets. The result is
/// a feasible witness, so never above the exact maximum.
DiscrepancyCertificate pair_discrepancy_heuristic(const ContingencyTable& table,
                                                  const IndexSubset& cluster_rows,
                                                  const IndexSubset& cluster_cols, int restarts,
                                                  std::uint64_t seed, bool disjoint_only = false);

/// Maximum over cluster pairs (a, b). All k^2 pairs are scanned, except for a
/// symmetric table under a shared partition where a <= b suffices.
DiscrepancyCertificate partition_discrepancy(const ContingencyTable& table,
                                             const PartitionPair& partition, DiscMode mode,
                                             const DiscOptions& options = {});

struct MinDiscResult {
  DiscrepancyCertificate certificate;
  PartitionPair partition;
};

/// disc_k. Exact mode enumerates restricted growth strings on both axes with
/// branch-and-bound; heuristic mode scores spectral and random candidate
/// partitions. Throws KExceedsRank, BudgetExceeded.
MinDiscResult min_disc(const ContingencyTable& table, int k, DiscMode mode,
                       const DiscOptions& options = {});

/// Number of proper k-partitions of n labelled items (Stirling numbers of the
/// second kind), saturating at UINT64_MAX.
std::uint64_t stirling2(int n, int k);

/// Calls visit(labels) for every restricted growth string of length n using
/// exactly k labels, in lexicographic order. Stops early if visit returns false.
template <typename Visit>
void for_each_partition(int n, int k, Visit&& visit);

}  // namespace mwdisc

#include "mwdisc/detail/partitions.hpp"
