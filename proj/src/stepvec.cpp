#include "mwdisc/stepvec.hpp"

#include "mwdisc/error.hpp"
#include "mwdisc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace mwdisc {

double step_modulus(int j) { return std::pow(0.8, j); }

Complex step_phase(int ell) {
  if (ell == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * ell / 29.0);
}

std::vector<int> StepVector::levels() const {
  std::set<int> js;
  for (const StepTerm& t : terms) js.insert(t.j);
  return {js.begin(), js.end()};
}

ComplexVector StepVector::level(int j) const {
  ComplexVector out = ComplexVector::Zero(entries.size());
  for (const StepTerm& t : terms) {
    if (t.j == j) out[t.index] = step_phase(t.ell);
  }
  return out;
}

namespace {

int level_of(double w) {
  // (4/5)^j <= w < (4/5)^{j-1}
  int j = static_cast<int>(std::ceil(std::log(w) / std::log(0.8)));
  while (step_modulus(j) > w) ++j;
  while (step_modulus(j - 1) <= w) --j;
  return j;
}

int phase_of(Complex z) {
  double theta = std::arg(z);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const int ell = static_cast<int>(std::floor(29.0 * theta / (2.0 * std::numbers::pi)));
  return std::clamp(ell, 0, 28);
}

}  // namespace

StepVector step_approx(const ComplexVector& x, const Vector& d) {
  const Index n = x.size();
  if (d.size() != n) throw Error(ErrorCode::InvalidArgument, "x and D differ in length");
  if (!d.allFinite() || (d.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "diagonal weights must be positive and finite");
  }
  if (!x.allFinite() || std::abs(x.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "x must have unit norm");
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) w[static_cast<std::size_t>(s)] = std::abs(x[s]) / d[s];
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return w[static_cast<std::size_t>(a)] < w[static_cast<std::size_t>(b)];
  });
  std::vector<bool> kept(static_cast<std::size_t>(n), true);
  double dropped = 0.0;
  for (Index s : order) {
    const double next = dropped + std::norm(x[s]);
    if (std::sqrt(next) > 1e-15) break;
    dropped = next;
    kept[static_cast<std::size_t>(s)] = false;
  }

  StepVector y;
  y.entries = ComplexVector::Zero(n);
  for (Index s = 0; s < n; ++s) {
    if (!kept[static_cast<std::size_t>(s)] || w[static_cast<std::size_t>(s)] == 0.0) continue;
    const StepTerm t{s, level_of(w[static_cast<std::size_t>(s)]), phase_of(x[s])};
    y.entries[s] = step_modulus(t.j) * step_phase(t.ell);
    y.terms.push_back(t);
  }

  const ComplexVector dy = d.cast<Complex>().cwiseProduct(y.entries);
  const double err = (x - dy).norm();
  const double size = dy.norm();
  if (!(err <= 1.0 / 3.0) || !(size <= 1.0 + 1e-12)) {
    throw Error(ErrorCode::ApproximationFailed, "||x - Dy|| = " + std::to_string(err) +
                                                    ", ||Dy|| = " + std::to_string(size));
  }
  return y;
}

StepVector step_approx(const Vector& x, const Vector& d) {
  return step_approx(ComplexVector(x.cast<Complex>()), d);
}

Complex inner(const ComplexVector& a, const ComplexVector& b) { return b.dot(a); }

double lemma2_check(const Matrix& m, const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != m.rows() || y.size() != m.cols()) {
    throw Error(ErrorCode::InvalidArgument, "vector lengths do not match the matrix");
  }
  constexpr double tol = 1e-12;
  if (x.norm() > 1.0 + tol) throw Error(ErrorCode::PreconditionViolated, "||x|| > 1");
  if (y.norm() > 1.0 + tol) throw Error(ErrorCode::PreconditionViolated, "||y|| > 1");
  const Spectrum sp = svd_full(m);
  const double sigma = sp.s(0);
  if (sigma > 0.0) {
    const ComplexVector v = sp.left.col(0).cast<Complex>();
    const ComplexVector u = sp.right.col(0).cast<Complex>();
    bool row_ok = false;
    bool col_ok = false;
    bool pair_ok = false;
    for (double sign : {1.0, -1.0}) {
      const bool r = (sign * v - x).norm() <= 1.0 / 3.0 + tol;
      const bool c = (sign * u - y).norm() <= 1.0 / 3.0 + tol;
      row_ok = row_ok || r;
      col_ok = col_ok || c;
      pair_ok = pair_ok || (r && c);
    }
    if (!row_ok) throw Error(ErrorCode::PreconditionViolated, "||v - x|| > 1/3");
    if (!col_ok) throw Error(ErrorCode::PreconditionViolated, "||u - y|| > 1/3");
    if (!pair_ok) {
      throw Error(ErrorCode::PreconditionViolated, "x and y approximate opposite signs of (v, u)");
    }
  }
  const ComplexVector my = m.cast<Complex>() * y;
  return 4.5 * std::abs(inner(x, my)) - sigma;
}

AuxF aux_F(const ContingencyTable& table, const PartitionPair& partition) {
  const Index m = table.rows();
  const Index n = table.cols();
  if (static_cast<Index>(partition.row_labels().size()) != m ||
      static_cast<Index>(partition.col_labels().size()) != n) {
    throw Error(ErrorCode::InvalidPartition, "partition does not match the table shape");
  }
  const int k = partition.k();
  const Matrix& c = table.values();
  const Vector& dr = table.row_sums();
  const Vector& dc = table.col_sums();
  const auto& rl = partition.row_labels();
  const auto& cl = partition.col_labels();

  Matrix cut = Matrix::Zero(k, k);
  Vector vr = Vector::Zero(k);
  Vector vc = Vector::Zero(k);
  for (Index i = 0; i < m; ++i) {
    vr[rl[static_cast<std::size_t>(i)]] += dr[i];
    for (Index j = 0; j < n; ++j) cut(rl[static_cast<std::size_t>(i)], cl[static_cast<std::size_t>(j)]) += c(i, j);
  }
  for (Index j = 0; j < n; ++j) vc[cl[static_cast<std::size_t>(j)]] += dc[j];

  AuxF out;
  out.block_rho.resize(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) out.block_rho(a, b) = cut(a, b) / (vr[a] * vc[b]);
  }
  out.density.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      out.density(i, j) = out.block_rho(rl[static_cast<std::size_t>(i)], cl[static_cast<std::size_t>(j)]);
    }
  }
  const Matrix expected = dr.asDiagonal() * out.density * dc.asDiagonal();
  out.f = c - expected;
  const Matrix plus = c + expected;
  out.row_identity_residual = (plus.rowwise().sum() - 2.0 * c.rowwise().sum()).cwiseAbs().maxCoeff();
  out.col_identity_residual = (plus.colwise().sum() - 2.0 * c.colwise().sum()).cwiseAbs().maxCoeff();
  return out;
}

namespace {

void check_labels(const std::vector<int>& labels, int parts, Index size) {
  if (static_cast<Index>(labels.size()) != size || parts < 1) {
    throw Error(ErrorCode::InvalidPartition, "labels do not match the vector length");
  }
  std::vector<bool> seen(static_cast<std::size_t>(parts), false);
  for (int l : labels) {
    if (l < 0 || l >= parts) throw Error(ErrorCode::InvalidPartition, "label out of range");
    seen[static_cast<std::size_t>(l)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw Error(ErrorCode::InvalidPartition, "empty part");
  }
}

void check_constant(const ComplexVector& v, const std::vector<int>& labels, int parts, const char* what) {
  std::vector<Index> first(static_cast<std::size_t>(parts), -1);
  for (Index i = 0; i < v.size(); ++i) {
    Index& f = first[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    if (f < 0) {
      f = i;
    } else if (v[i] != v[f]) {
      throw Error(ErrorCode::NotStepwiseConstant,
                  std::string(what) + " differs at " + std::to_string(f) + " and " + std::to_string(i));
    }
  }
}

}  // namespace

QuotientBound quotient_bound(const Matrix& c, const ComplexVector& x, const ComplexVector& y,
                             const Vector& row_weights, const Vector& col_weights,
                             const std::vector<int>& row_labels, int row_parts,
                             const std::vector<int>& col_labels, int col_parts) {
  const Index m = c.rows();
  const Index n = c.cols();
  if (x.size() != m || y.size() != n || row_weights.size() != m || col_weights.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  }
  if ((row_weights.array() <= 0.0).any() || (col_weights.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "weights must be positive");
  }
  check_labels(row_labels, row_parts, m);
  check_labels(col_labels, col_parts, n);
  check_constant(x, row_labels, row_parts, "x");
  check_constant(y, col_labels, col_parts, "y");

  Vector vr = Vector::Zero(row_parts);
  Vector vc = Vector::Zero(col_parts);
  for (Index i = 0; i < m; ++i) vr[row_labels[static_cast<std::size_t>(i)]] += row_weights[i];
  for (Index j = 0; j < n; ++j) vc[col_labels[static_cast<std::size_t>(j)]] += col_weights[j];
  QuotientBound out;
  out.quotient = Matrix::Zero(row_parts, col_parts);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      out.quotient(row_labels[static_cast<std::size_t>(i)], col_labels[static_cast<std::size_t>(j)]) += c(i, j);
    }
  }
  for (int a = 0; a < row_parts; ++a) {
    for (int b = 0; b < col_parts; ++b) out.quotient(a, b) /= std::sqrt(vr[a] * vc[b]);
  }
  const ComplexVector cy = c.cast<Complex>() * y;
  out.lhs = std::abs(inner(x, cy));
  const double xr = row_weights.cwiseSqrt().cast<Complex>().cwiseProduct(x).norm();
  const double yc = col_weights.cwiseSqrt().cast<Complex>().cwiseProduct(y).norm();
  out.rhs = svd_full(out.quotient).s(0) * xr * yc;
  return out;
}

std::uint64_t bn_step_count(double epsilon, std::uint64_t n) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  const double phases = std::ceil(8.0 * std::numbers::pi / epsilon);
  const double moduli = std::ceil(4.0 / epsilon * std::log2(2.0 * static_cast<double>(n) / epsilon));
  return static_cast<std::uint64_t>(phases) * static_cast<std::uint64_t>(moduli);
}

}  // namespace mwdisc
