#pragma once

#include "mwdisc/table.hpp"

#include <optional>

namespace mwdisc {

/// Singular triples in non-increasing order of value.
///
/// Indexing follows the convention that position 0 holds the largest value,
/// so for a normalized table s(k) is the (k+1)-th largest singular value
/// counting the trivial 1.
struct Spectrum {
  Vector values;
  Matrix left;   ///< m x p, orthonormal columns
  Matrix right;  ///< n x p, orthonormal columns
  std::optional<Index> trivial_index;

  Index size() const { return values.size(); }
  /// Value at position k, or 0 beyond the last computed value.
  double s(Index k) const { return k < values.size() ? values[k] : 0.0; }
};

struct SvdOptions {
  /// Pairs of columns count as orthogonal once |cos| <= tolerance.
  double tolerance = 1e-12;
  /// Sweep cap is max_sweeps_factor * min(m, n).
  int max_sweeps_factor = 100;
};

/// All min(m,n) singular triples by one-sided Jacobi rotations.
///
/// Each pair is signed so that the largest-magnitude coordinate of its left
/// vector is positive. Throws NoConvergence when the sweep cap is hit.
Spectrum svd_full(const Matrix& matrix, const SvdOptions& options = {});

/// Spectrum of C_nor with the trivial pair (1, sqrt(d_row), sqrt(d_col))
/// located. Throws TrivialPairNotFound if no pair matches.
Spectrum nontrivial_spectrum(const NormalizedTable& table);

/// Eigenpairs of the normalized modularity matrix.
///
/// values[0..n-2] are mu_1..mu_{n-1}, ordered by decreasing absolute value
/// (ties: larger signed value first, then solver order); values[n-1] is the
/// structural zero whose eigenvector is sqrt(d).
struct ModularitySpectrum {
  Vector values;
  Matrix vectors;
  Index structural_index = 0;

  Index size() const { return values.size(); }
  /// mu_k for 1 <= k <= n-1.
  double mu(Index k) const;
  /// Singular values of W_D: s(0) = 1, s(k) = |mu_k|, zero beyond n-1.
  double s(Index k) const;
};

struct ModularityDecomposition {
  Vector degrees;           ///< d, summing to 1
  Matrix modularity;        ///< M = W - d d^T (weights rescaled to total 1)
  Matrix normalized_adjacency;  ///< W_D = D^{-1/2} W D^{-1/2}
  Matrix normalized_modularity; ///< M_D = W_D - sqrt(d) sqrt(d)^T
  ModularitySpectrum spectrum;
  /// max-entry residuals of M_D = D^{-1/2} M D^{-1/2} and of M = W - d d^T
  double identity_residual = 0.0;
};

/// Throws InvalidArgument for directed graphs, ZeroDegree, Disconnected.
ModularityDecomposition normalized_modularity(const WeightedGraph& graph);

/// Shifted interlacing under a rank-k perturbation: returns
/// s_{i+k}(A) - s_i(A+B) for every valid i. Each entry is <= 0 in exact
/// arithmetic. Throws RankExceeded if B has more than k singular values
/// above 1e-9 * max(1, ||B||).
Vector interlacing_check(const Matrix& a, const Matrix& b, Index k);

/// Flip the sign of v so that its largest-magnitude coordinate is positive.
/// Returns true if a flip happened.
bool orient(Eigen::Ref<Vector> v);

}  // namespace mwdisc
