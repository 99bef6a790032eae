#pragma once

#include "mwdisc/partition.hpp"
#include "mwdisc/spectrum.hpp"
#include "mwdisc/table.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mwdisc {

/// (k-1)-dimensional spectral coordinates, one row of `points` per item.
struct Representatives {
  Matrix points;   ///< count x (k-1)
  Vector weights;  ///< margins, summing to 1
  std::string source;
};

struct RepresentativePair {
  Representatives rows;
  Representatives cols;
};

/// Row points D_row^{-1/2} v_i and column points D_col^{-1/2} u_i for
/// i = 1..k-1; the trivial pair is skipped. Throws KExceedsRank.
RepresentativePair representatives(const NormalizedTable& table, const Spectrum& spectrum, int k);

/// Vertex points D^{-1/2} u_i from the eigenvectors of mu_1..mu_{k-1}.
Representatives representatives(const ModularityDecomposition& decomposition, int k);

struct KMeansResult {
  std::vector<int> labels;
  Matrix centers;  ///< k x dim, weighted means
  double s_k_squared = 0.0;
  int restart = 0;  ///< index of the winning restart
};

/// sum_a sum_{j in V_a} w_j |r_j - c_a|^2 with c_a the weighted center.
double weighted_objective(const Representatives& reps, const std::vector<int>& labels, int k);

/// Weighted Lloyd iteration from weighted k-means++ seeds; best of `restarts`
/// by (objective, restart index). Throws DegenerateInput when k exceeds the
/// number of distinct points, EmptyClusterUnrecoverable after 10 reseeds.
KMeansResult weighted_kmeans(const Representatives& reps, int k, int restarts, std::uint64_t seed);

/// Exact S_k^2 by enumerating every proper k-partition. Tiny inputs only.
KMeansResult exact_k_variance(const Representatives& reps, int k);

struct PipelineResult {
  PartitionPair partition;
  double s_row = 0.0;  ///< S_{k,row} = sqrt of the row k-variance
  double s_col = 0.0;
  double s_k = 0.0;    ///< k-th singular value (|mu_k| for graphs)
  double back_estimate = 0.0;
  KMeansResult row_fit;
  KMeansResult col_fit;
};

/// Spectral biclustering of a table. back_estimate is
/// sqrt(2k) (S_row + S_col) + s_k.
PipelineResult spectral_partition_pipeline(const ContingencyTable& table, int k, int restarts,
                                           std::uint64_t seed);

/// Spectral clustering of an undirected graph from the normalized modularity
/// eigenvectors. Both axes share the vertex partition, s_row = s_col = S_k and
/// back_estimate is sqrt(2k) S_k + |mu_k|.
PipelineResult spectral_partition_pipeline(const WeightedGraph& graph, int k, int restarts,
                                           std::uint64_t seed);

}  // namespace mwdisc
