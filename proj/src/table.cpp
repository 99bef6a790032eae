#include "mwdisc/table.hpp"

#include "mwdisc/error.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace mwdisc {

ContingencyTable ContingencyTable::build(const Matrix& raw, Construction mode) {
  if (raw.rows() < 1 || raw.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "table must have at least one row and one column");
  }
  for (Index j = 0; j < raw.cols(); ++j) {
    for (Index i = 0; i < raw.rows(); ++i) {
      const double v = raw(i, j);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonNumeric,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
      }
      if (v < 0.0) {
        throw Error(ErrorCode::NegativeEntry,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(v));
      }
    }
  }
  const double scale = raw.sum();
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::AllZero, "table has no positive entry");
  }

  ContingencyTable t;
  t.unscaled_ = raw;
  t.unscaled_row_sums_ = raw.rowwise().sum();
  t.unscaled_col_sums_ = raw.colwise().sum().transpose();
  t.scale_ = scale;
  t.values_ = raw / scale;
  t.row_sums_ = t.values_.rowwise().sum();
  t.col_sums_ = t.values_.colwise().sum().transpose();

  if (mode == Construction::Strict && !is_nondecomposable(t)) {
    throw Error(ErrorCode::DecomposableTable, "support graph of the table is disconnected");
  }
  return t;
}

bool is_nondecomposable(const ContingencyTable& table) {
  const Index m = table.rows();
  const Index n = table.cols();
  const Matrix& c = table.values();
  // vertices 0..m-1 are rows, m..m+n-1 are columns
  std::vector<char> seen(static_cast<std::size_t>(m + n), 0);
  std::queue<Index> frontier;
  frontier.push(0);
  seen[0] = 1;
  Index reached = 1;
  while (!frontier.empty()) {
    const Index v = frontier.front();
    frontier.pop();
    if (v < m) {
      for (Index j = 0; j < n; ++j) {
        if (c(v, j) > 0.0 && !seen[m + j]) {
          seen[m + j] = 1;
          ++reached;
          frontier.push(m + j);
        }
      }
    } else {
      const Index j = v - m;
      for (Index i = 0; i < m; ++i) {
        if (c(i, j) > 0.0 && !seen[i]) {
          seen[i] = 1;
          ++reached;
          frontier.push(i);
        }
      }
    }
  }
  return reached == m + n;
}

NormalizedTable normalize(const ContingencyTable& table) {
  const Vector& dr = table.row_sums();
  const Vector& dc = table.col_sums();
  for (Index i = 0; i < dr.size(); ++i) {
    if (!(dr[i] > 0.0)) throw Error(ErrorCode::ZeroMargin, "row " + std::to_string(i));
  }
  for (Index j = 0; j < dc.size(); ++j) {
    if (!(dc[j] > 0.0)) throw Error(ErrorCode::ZeroMargin, "column " + std::to_string(j));
  }
  Matrix v(table.rows(), table.cols());
  for (Index j = 0; j < v.cols(); ++j) {
    for (Index i = 0; i < v.rows(); ++i) {
      v(i, j) = table.values()(i, j) / std::sqrt(dr[i] * dc[j]);
    }
  }
  return NormalizedTable(std::move(v), table);
}

IndexSubset IndexSubset::make(Axis axis, std::vector<Index> members, Index axis_size) {
  if (members.empty()) throw Error(ErrorCode::EmptySubset, "subset must be nonempty");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.front() < 0 || members.back() >= axis_size) {
    throw Error(ErrorCode::IndexOutOfRange,
                "subset index outside [0," + std::to_string(axis_size) + ")");
  }
  return IndexSubset(axis, std::move(members));
}

IndexSubset IndexSubset::all(Axis axis, Index axis_size) {
  std::vector<Index> m(static_cast<std::size_t>(axis_size));
  for (Index i = 0; i < axis_size; ++i) m[static_cast<std::size_t>(i)] = i;
  return make(axis, std::move(m), axis_size);
}

bool IndexSubset::contains(Index i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

CutVolumeDensity cut_volume_density(const ContingencyTable& table, const IndexSubset& x,
                                    const IndexSubset& y) {
  if (x.axis() != Axis::Row || y.axis() != Axis::Column) {
    throw Error(ErrorCode::InvalidArgument, "expected a row subset and a column subset");
  }
  if (x.members().back() >= table.rows() || y.members().back() >= table.cols()) {
    throw Error(ErrorCode::IndexOutOfRange, "subset does not fit the table");
  }
  CutVolumeDensity r;
  for (Index i : x.members()) {
    r.vol_x += table.row_sums()[i];
    for (Index j : y.members()) r.cut += table.values()(i, j);
  }
  for (Index j : y.members()) r.vol_y += table.col_sums()[j];
  r.density = r.cut / (r.vol_x * r.vol_y);
  return r;
}

WeightedGraph WeightedGraph::make(Matrix weights, bool directed) {
  if (weights.rows() != weights.cols() || weights.rows() < 1) {
    throw Error(ErrorCode::InvalidArgument, "weight matrix must be square and nonempty");
  }
  const Index n = weights.rows();
  for (Index i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0) {
      throw Error(ErrorCode::InvalidArgument, "diagonal entry " + std::to_string(i) + " is nonzero");
    }
    for (Index j = 0; j < n; ++j) {
      if (!std::isfinite(weights(i, j))) throw Error(ErrorCode::NonNumeric, "weight is not finite");
      if (weights(i, j) < 0.0) {
        throw Error(ErrorCode::NegativeEntry,
                    "weight (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
      }
      if (!directed && weights(i, j) != weights(j, i)) {
        throw Error(ErrorCode::InvalidArgument,
                    "undirected weights are not symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
      }
    }
  }
  return WeightedGraph(std::move(weights), directed);
}

bool WeightedGraph::is_connected() const {
  const Index n = size();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<Index> frontier;
  frontier.push(0);
  seen[0] = 1;
  Index reached = 1;
  while (!frontier.empty()) {
    const Index v = frontier.front();
    frontier.pop();
    for (Index u = 0; u < n; ++u) {
      if (!seen[u] && (weights_(v, u) > 0.0 || weights_(u, v) > 0.0)) {
        seen[u] = 1;
        ++reached;
        frontier.push(u);
      }
    }
  }
  return reached == n;
}

ContingencyTable graph_as_table(const WeightedGraph& graph) {
  return ContingencyTable::build(graph.weights(), Construction::Lenient);
}

}  // namespace mwdisc
