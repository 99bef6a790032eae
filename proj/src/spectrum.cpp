#include "mwdisc/spectrum.hpp"

#include "mwdisc/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mwdisc {

Spectrum nontrivial_spectrum(const NormalizedTable& table) {
  Spectrum s = svd_full(table.values());
  const Vector left_trivial = table.source().row_sums().cwiseSqrt();
  const Vector right_trivial = table.source().col_sums().cwiseSqrt();
  for (Index k = 0; k < s.size(); ++k) {
    if (std::abs(s.values[k] - 1.0) > 1e-9) break;
    const double cl = std::abs(s.left.col(k).dot(left_trivial));
    const double cr = std::abs(s.right.col(k).dot(right_trivial));
    if (cl >= 1.0 - 1e-9 && cr >= 1.0 - 1e-9) {
      s.trivial_index = k;
      return s;
    }
  }
  throw Error(ErrorCode::TrivialPairNotFound,
              "no singular pair of value 1 aligned with (sqrt(d_row), sqrt(d_col))");
}

double ModularitySpectrum::mu(Index k) const {
  if (k < 1 || k >= values.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "mu_k is defined for 1 <= k <= n-1");
  }
  return values[k - 1];
}

double ModularitySpectrum::s(Index k) const {
  if (k == 0) return 1.0;
  if (k >= values.size()) return 0.0;
  return std::abs(values[k - 1]);
}

ModularityDecomposition normalized_modularity(const WeightedGraph& graph) {
  if (graph.directed()) {
    throw Error(ErrorCode::InvalidArgument, "normalized modularity needs an undirected graph");
  }
  const Index n = graph.size();
  const double total = graph.weights().sum();
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroDegree, "graph has no edges");
  const Matrix w = graph.weights() / total;
  const Vector d = w.rowwise().sum();
  for (Index i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) throw Error(ErrorCode::ZeroDegree, "vertex " + std::to_string(i));
  }
  if (!graph.is_connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");

  ModularityDecomposition out;
  out.degrees = d;
  const Vector sqrt_d = d.cwiseSqrt();
  const Vector inv_sqrt_d = sqrt_d.cwiseInverse();
  out.modularity = w - d * d.transpose();
  out.normalized_adjacency = inv_sqrt_d.asDiagonal() * w * inv_sqrt_d.asDiagonal();
  out.normalized_modularity = out.normalized_adjacency - sqrt_d * sqrt_d.transpose();
  const Matrix via_m = inv_sqrt_d.asDiagonal() * out.modularity * inv_sqrt_d.asDiagonal();
  out.identity_residual = (via_m - out.normalized_modularity).cwiseAbs().maxCoeff();

  // Orthonormal basis of sqrt(d)^perp from the Householder reflector sending
  // e_0 to sqrt(d); the structural zero is split off exactly this way even
  // when 0 is a repeated eigenvalue.
  Vector h = sqrt_d;
  h[0] -= 1.0;
  Matrix q = Matrix::Identity(n, n);
  const double hn2 = h.squaredNorm();
  if (hn2 > 0.0) q -= (2.0 / hn2) * h * h.transpose();
  const Matrix basis = q.rightCols(n - 1);

  ModularitySpectrum& spec = out.spectrum;
  spec.values.resize(n);
  spec.vectors.resize(n, n);
  spec.structural_index = n - 1;
  if (n > 1) {
    Matrix reduced = basis.transpose() * out.normalized_modularity * basis;
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(reduced);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NoConvergence, "symmetric eigensolver failed");
    }
    const Vector& ev = solver.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(n - 1));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double fa = std::abs(ev[a]);
      const double fb = std::abs(ev[b]);
      if (fa != fb) return fa > fb;
      return ev[a] > ev[b];
    });
    for (Index k = 0; k + 1 < n; ++k) {
      const Index src = order[static_cast<std::size_t>(k)];
      spec.values[k] = ev[src];
      Vector vec = basis * solver.eigenvectors().col(src);
      vec.normalize();
      orient(vec);
      spec.vectors.col(k) = vec;
    }
  }
  spec.values[n - 1] = 0.0;
  spec.vectors.col(n - 1) = sqrt_d;
  return out;
}

Vector interlacing_check(const Matrix& a, const Matrix& b, Index k) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::InvalidArgument, "interlacing needs matrices of equal shape");
  }
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "k must be nonnegative");
  const Vector sb = svd_full(b).values;
  const double floor = 1e-9 * std::max(1.0, sb.size() ? sb[0] : 0.0);
  for (Index i = k; i < sb.size(); ++i) {
    if (sb[i] > floor) {
      throw Error(ErrorCode::RankExceeded,
                  "perturbation has singular value " + std::to_string(sb[i]) + " at position " +
                      std::to_string(i) + " >= k=" + std::to_string(k));
    }
  }
  const Vector sa = svd_full(a).values;
  const Vector sab = svd_full(a + b).values;
  const Index p = sa.size();
  Vector slack(std::max<Index>(p - k, 0));
  for (Index i = 0; i + k < p; ++i) slack[i] = sa[i + k] - sab[i];
  return slack;
}

}  // namespace mwdisc
