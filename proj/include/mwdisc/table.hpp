#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace mwdisc {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Construction {
  Strict,   ///< reject tables whose support graph is disconnected
  Lenient,  ///< accept them; normalize() still refuses zero margins
};

/// Nonnegative m x n array rescaled to total mass 1, with cached margins.
///
/// The array exactly as supplied is kept alongside the rescaled one. Every
/// discrepancy quantity is invariant under a global rescale, so aggregate
/// arithmetic can be carried out on the supplied values, which stays exact
/// for integer-valued input.
class ContingencyTable {
 public:
  /// Throws NegativeEntry, AllZero, or (strict mode) DecomposableTable.
  static ContingencyTable build(const Matrix& raw, Construction mode = Construction::Strict);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }

  const Matrix& values() const { return values_; }
  const Vector& row_sums() const { return row_sums_; }
  const Vector& col_sums() const { return col_sums_; }
  double total() const { return 1.0; }

  const Matrix& unscaled() const { return unscaled_; }
  const Vector& unscaled_row_sums() const { return unscaled_row_sums_; }
  const Vector& unscaled_col_sums() const { return unscaled_col_sums_; }
  /// Sum of the supplied entries.
  double scale() const { return scale_; }

 private:
  ContingencyTable() = default;

  Matrix values_;
  Vector row_sums_;
  Vector col_sums_;
  Matrix unscaled_;
  Vector unscaled_row_sums_;
  Vector unscaled_col_sums_;
  double scale_ = 0.0;
};

/// True iff the bipartite support graph (rows and columns as vertices, an
/// edge wherever c_ij > 0) is connected.
///
/// This is the irreducibility of C C^T (equivalently C^T C): (C C^T)_{ii'} > 0
/// exactly when rows i and i' share a column of positive mass, so the graph
/// of C C^T is the row-to-row projection of the support graph. It is
/// connected iff the support graph is, provided every column has positive
/// mass, which connectivity of the support graph itself guarantees.
bool is_nondecomposable(const ContingencyTable& table);

/// C_nor = D_row^{-1/2} C D_col^{-1/2}.
class NormalizedTable {
 public:
  const Matrix& values() const { return values_; }
  const ContingencyTable& source() const { return source_; }

 private:
  friend NormalizedTable normalize(const ContingencyTable& table);
  NormalizedTable(Matrix values, ContingencyTable source)
      : values_(std::move(values)), source_(std::move(source)) {}

  Matrix values_;
  ContingencyTable source_;
};

/// Throws ZeroMargin when a row or column carries no mass.
NormalizedTable normalize(const ContingencyTable& table);

enum class Axis { Row, Column };

/// Nonempty, sorted, duplicate-free set of indices into one axis.
class IndexSubset {
 public:
  /// Throws EmptySubset or IndexOutOfRange.
  static IndexSubset make(Axis axis, std::vector<Index> members, Index axis_size);
  static IndexSubset all(Axis axis, Index axis_size);

  Axis axis() const { return axis_; }
  const std::vector<Index>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(Index i) const;

 private:
  IndexSubset(Axis axis, std::vector<Index> members) : axis_(axis), members_(std::move(members)) {}

  Axis axis_;
  std::vector<Index> members_;
};

struct CutVolumeDensity {
  double cut = 0.0;
  double vol_x = 0.0;
  double vol_y = 0.0;
  double density = 0.0;
};

/// c(X,Y), Vol(X), Vol(Y) and rho = c(X,Y) / (Vol(X) Vol(Y)).
CutVolumeDensity cut_volume_density(const ContingencyTable& table, const IndexSubset& x,
                                    const IndexSubset& y);

/// Square nonnegative weight matrix with zero diagonal; symmetric unless directed.
class WeightedGraph {
 public:
  static WeightedGraph make(Matrix weights, bool directed = false);

  Index size() const { return weights_.rows(); }
  const Matrix& weights() const { return weights_; }
  bool directed() const { return directed_; }
  /// Row sums (out-degrees when directed).
  Vector degrees() const { return weights_.rowwise().sum(); }
  bool is_connected() const;

 private:
  WeightedGraph(Matrix weights, bool directed) : weights_(std::move(weights)), directed_(directed) {}

  Matrix weights_;
  bool directed_ = false;
};

/// Rows play the out-role and columns the in-role. Constructed leniently:
/// bipartite graphs have a disconnected double cover but are still valid
/// inputs for discrepancy.
ContingencyTable graph_as_table(const WeightedGraph& graph);

}  // namespace mwdisc
