#pragma once

#include "mwdisc/table.hpp"

#include <vector>

namespace mwdisc {

/// Proper k-partitions of the rows and of the columns, as label vectors.
class PartitionPair {
 public:
  /// Throws InvalidPartition unless every label lies in [0,k) and every
  /// class is nonempty on both axes.
  static PartitionPair make(std::vector<int> row_labels, std::vector<int> col_labels, int k);
  /// Same vertex partition on both axes (graph case).
  static PartitionPair shared(std::vector<int> labels, int k);

  int k() const { return k_; }
  const std::vector<int>& row_labels() const { return row_labels_; }
  const std::vector<int>& col_labels() const { return col_labels_; }
  bool is_shared() const { return row_labels_ == col_labels_; }

  std::vector<Index> row_cluster(int a) const;
  std::vector<Index> col_cluster(int b) const;

 private:
  PartitionPair(std::vector<int> r, std::vector<int> c, int k)
      : row_labels_(std::move(r)), col_labels_(std::move(c)), k_(k) {}

  std::vector<int> row_labels_;
  std::vector<int> col_labels_;
  int k_ = 1;
};

/// Relabel so that labels appear in order of first occurrence (restricted
/// growth form); two partitions are equal iff their canonical forms are.
std::vector<int> canonical_labels(const std::vector<int>& labels);

}  // namespace mwdisc
