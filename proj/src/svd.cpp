#include "mwdisc/error.hpp"
#include "mwdisc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mwdisc {

bool orient(Eigen::Ref<Vector> v) {
  if (v.size() == 0) return false;
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0.0) {
    v = -v;
    return true;
  }
  return false;
}

namespace {

struct TallSvd {
  Vector sigma;
  Matrix u;
  Matrix v;
};

// Hestenes iteration on a matrix with rows >= cols: rotate column pairs until
// all are mutually orthogonal; then A V = [a_1 ... a_n] with |a_i| = sigma_i.
TallSvd hestenes(Matrix a, const SvdOptions& opt) {
  const Index m = a.rows();
  const Index n = a.cols();
  Matrix v = Matrix::Identity(n, n);
  const long max_sweeps = static_cast<long>(opt.max_sweeps_factor) * std::max<Index>(n, 1);

  bool converged = (n < 2);
  for (long sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        if (alpha == 0.0 || beta == 0.0) continue;
        const double gamma = a.col(p).dot(a.col(q));
        if (std::abs(gamma) <= opt.tolerance * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Index i = 0; i < m; ++i) {
          const double ap = a(i, p);
          const double aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (Index i = 0; i < n; ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence,
                "one-sided Jacobi did not converge within " + std::to_string(max_sweeps) + " sweeps");
  }

  TallSvd out;
  out.sigma.resize(n);
  out.u = Matrix::Zero(m, n);
  std::vector<Index> empty;
  for (Index j = 0; j < n; ++j) {
    const double norm = a.col(j).norm();
    out.sigma[j] = norm;
    if (norm > 0.0) {
      out.u.col(j) = a.col(j) / norm;
    } else {
      empty.push_back(j);
    }
  }
  // Complete the left basis where the column collapsed to zero.
  Index candidate = 0;
  for (Index j : empty) {
    while (candidate < m) {
      Vector e = Vector::Unit(m, candidate++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index c = 0; c < n; ++c) {
          if (c != j && out.u.col(c).squaredNorm() > 0.0) e -= out.u.col(c).dot(e) * out.u.col(c);
        }
      }
      const double norm = e.norm();
      if (norm > 1e-3) {
        out.u.col(j) = e / norm;
        break;
      }
    }
  }
  out.v = std::move(v);
  return out;
}

}  // namespace

Spectrum svd_full(const Matrix& matrix, const SvdOptions& options) {
  if (!matrix.allFinite()) throw Error(ErrorCode::NonNumeric, "matrix has non-finite entries");
  const bool wide = matrix.rows() < matrix.cols();
  TallSvd t = wide ? hestenes(matrix.transpose(), options) : hestenes(matrix, options);
  Matrix& left = wide ? t.v : t.u;
  Matrix& right = wide ? t.u : t.v;

  const Index p = t.sigma.size();
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return t.sigma[x] > t.sigma[y]; });

  Spectrum s;
  s.values.resize(p);
  s.left.resize(left.rows(), p);
  s.right.resize(right.rows(), p);
  for (Index k = 0; k < p; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    s.values[k] = t.sigma[src];
    s.left.col(k) = left.col(src);
    s.right.col(k) = right.col(src);
    if (orient(s.left.col(k))) s.right.col(k) = -s.right.col(k);
  }
  return s;
}

}  // namespace mwdisc
