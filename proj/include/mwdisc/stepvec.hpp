#pragma once

#include "mwdisc/partition.hpp"
#include "mwdisc/table.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace mwdisc {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// (4/5)^j as a double.
double step_modulus(int j);
/// e^{2 pi i ell / 29}; ell = 14 is the phase used for negative reals.
Complex step_phase(int ell);

struct StepTerm {
  Index index = 0;
  int j = 0;
  int ell = 0;
};

/// Vector whose nonzero entries are (4/5)^j e^{2 pi i ell / 29}.
struct StepVector {
  ComplexVector entries;
  std::vector<StepTerm> terms;  ///< one per nonzero entry, by index

  Index size() const { return entries.size(); }
  /// Distinct j values in increasing order.
  std::vector<int> levels() const;
  /// Unit-modulus part of level j: entries e^{2 pi i ell/29} on the
  /// coordinates of that level, zero elsewhere.
  ComplexVector level(int j) const;
};

/// Step approximation of a unit vector x against positive weights d, such
/// that ||x - D y|| <= 1/3 and ||D y|| <= 1.
///
/// Coordinates of D^{-1} x are grouped between consecutive powers of 4/5:
/// a coordinate w gets j with (4/5)^j <= |w| < (4/5)^{j-1}, so a value on a
/// cut-point is kept exactly. The phase index is
/// floor(29 theta / 2 pi) for the argument theta in [0, 2 pi). The smallest
/// coordinates are dropped while the dropped part of x has norm <= 1e-15.
/// Throws InvalidArgument for a non-unit x or nonpositive d, and
/// ApproximationFailed if a post-condition does not hold.
StepVector step_approx(const ComplexVector& x, const Vector& d);
StepVector step_approx(const Vector& x, const Vector& d);

/// <a, b> = sum_i a_i conj(b_i).
Complex inner(const ComplexVector& a, const ComplexVector& b);

/// (9/2) |<x, M y>| - sigma_max(M), checked against the top singular pair of
/// M up to a common sign. Throws PreconditionViolated naming the failed
/// norm condition.
double lemma2_check(const Matrix& m, const ComplexVector& x, const ComplexVector& y);

struct AuxF {
  Matrix f;         ///< C - D_row R D_col
  Matrix density;   ///< R, rho(R_a, C_b) on each block
  Matrix block_rho; ///< k x k
  /// max |(C + D_row R D_col) 1 - 2 C 1| and its column analogue
  double row_identity_residual = 0.0;
  double col_identity_residual = 0.0;
};

AuxF aux_F(const ContingencyTable& table, const PartitionPair& partition);

struct QuotientBound {
  double lhs = 0.0;  ///< |<x, C y>|
  double rhs = 0.0;  ///< ||C'|| ||D_r^{1/2} x|| ||D_c^{1/2} y||
  Matrix quotient;   ///< C'
};

/// Bound on |<x, C y>| for x, y constant on the parts of the given row and
/// column partitions, with volumes taken from the supplied weights.
/// Throws NotStepwiseConstant.
QuotientBound quotient_bound(const Matrix& c, const ComplexVector& x, const ComplexVector& y,
                             const Vector& row_weights, const Vector& col_weights,
                             const std::vector<int>& row_labels, int row_parts,
                             const std::vector<int>& col_labels, int col_parts);

/// ceil(8 pi / eps) * ceil((4 / eps) log2(2 n / eps)) for 0 < eps <= 1.
std::uint64_t bn_step_count(double epsilon, std::uint64_t n);

struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t checks = 1;  ///< instances folded into this row (worst kept)
  double slack() const { return rhs - lhs; }
};

struct ProofTrace {
  int k = 0;
  double alpha = 0.0;
  bool degenerate = false;  ///< alpha = 0: log_{4/5} alpha is undefined
  double gamma = 0.0;
  double s_k = 0.0;
  double f_norm = 0.0;
  double inner = 0.0;
  double term_a = 0.0;
  double term_b = 0.0;
  double term_c = 0.0;
  double bound_abc = 0.0;
  double final_bound = 0.0;
  StepVector x;
  StepVector y;
  std::vector<Inequality> steps;

  double min_slack() const;
  const Inequality* worst() const;
};

/// Replays every inequality of the bound s_k <= 9 alpha (k + 2 - 9k ln alpha)
/// at the given partition, alpha being its exact discrepancy. Throws
/// AlphaNotBelowOne and whatever the exact discrepancy throws.
ProofTrace trace_theorem1(const ContingencyTable& table, const PartitionPair& partition,
                          std::uint64_t budget = std::uint64_t{1} << 24);

struct WeakBound {
  double s_k = 0.0;
  double inner = 0.0;        ///< |<x, F y>|
  double quotient_norm = 0.0;  ///< ||F'|| on the subdivided partitions
  double max_entry = 0.0;    ///< max |f'_ab|
  int rows_parts = 0;        ///< l_1
  int col_parts = 0;         ///< l_2
  int row_levels = 0;        ///< r_1, distinct values of x
  int col_levels = 0;        ///< r_2
  double ell = 0.0;          ///< sqrt(l_1 l_2)
  double alpha = 0.0;
  double bound = 0.0;        ///< (9/2) ell alpha
  std::string label = "weak";
  std::vector<Inequality> steps;
};

/// The size-dependent bound s_k <= (9/2) l alpha obtained by refining the
/// partition along the distinct values of the step vectors.
WeakBound weak_bound_replay(const ContingencyTable& table, const PartitionPair& partition,
                            std::uint64_t budget = std::uint64_t{1} << 24);

}  // namespace mwdisc
