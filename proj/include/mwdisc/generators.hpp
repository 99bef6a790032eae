#pragma once

#include "mwdisc/partition.hpp"
#include "mwdisc/table.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mwdisc {

/// Symmetric k x k edge probabilities in [0, 1].
class PatternMatrix {
 public:
  /// Throws InvalidArgument for a non-square, asymmetric or out-of-range input.
  static PatternMatrix make(Matrix probabilities);
  const Matrix& probabilities() const { return p_; }
  int k() const { return static_cast<int>(p_.rows()); }

 private:
  explicit PatternMatrix(Matrix p) : p_(std::move(p)) {}
  Matrix p_;
};

struct GeneratorInfo {
  std::string model;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> warnings;
};

struct PlantedGraph {
  WeightedGraph graph;
  std::vector<int> labels;
  int k = 1;
  GeneratorInfo info;
};

struct PlantedTable {
  Matrix raw;  ///< entries before rescaling to total 1
  ContingencyTable table;
  PartitionPair partition;
  GeneratorInfo info;
};

/// Sizes summing to n, each at least 1, the rest split by largest remainders.
std::vector<Index> apportion(Index n, const std::vector<double>& proportions);

/// Vertices in V_a and V_b are joined independently with probability p_ab.
/// Throws DegenerateParameters; a pattern whose block graph is disconnected
/// or has an empty diagonal-only block is generated but flagged in warnings.
PlantedGraph generalized_random_graph(Index n, const std::vector<double>& proportions,
                                      const PatternMatrix& pattern, std::uint64_t seed);

/// Connected simple bipartite graph with degree k1 on the n1 side and k2 on
/// the n2 side. Labels are 0 for the first side and 1 for the second.
/// Throws InfeasibleDegrees or GenerationFailed.
PlantedGraph bipartite_biregular(Index n1, Index n2, Index k1, Index k2, std::uint64_t seed);

/// Entry (i, j) is r_i * densities(a(i), b(j)) * c_j with integer margin
/// profiles r, c in [1, 4], then multiplied by 1 + epsilon u_ij with u_ij
/// uniform on [-1, 1]. Throws DegenerateParameters.
PlantedTable block_table(Index m, Index n, int k, const std::vector<double>& row_proportions,
                         const std::vector<double>& col_proportions, const Matrix& densities,
                         double epsilon, std::uint64_t seed);

}  // namespace mwdisc
