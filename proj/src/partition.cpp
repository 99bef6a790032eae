#include "mwdisc/partition.hpp"

#include "mwdisc/error.hpp"

#include <string>

namespace mwdisc {

namespace {

void check_labels(const std::vector<int>& labels, int k, const char* axis) {
  if (labels.empty()) throw Error(ErrorCode::InvalidPartition, std::string(axis) + " labels are empty");
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    if (l < 0 || l >= k) {
      throw Error(ErrorCode::InvalidPartition,
                  std::string(axis) + " label " + std::to_string(l) + " outside [0," + std::to_string(k) + ")");
    }
    used[static_cast<std::size_t>(l)] = 1;
  }
  for (int a = 0; a < k; ++a) {
    if (!used[static_cast<std::size_t>(a)]) {
      throw Error(ErrorCode::InvalidPartition,
                  std::string(axis) + " cluster " + std::to_string(a) + " is empty");
    }
  }
}

std::vector<Index> members_of(const std::vector<int>& labels, int a) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == a) out.push_back(static_cast<Index>(i));
  }
  return out;
}

}  // namespace

PartitionPair PartitionPair::make(std::vector<int> row_labels, std::vector<int> col_labels, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidPartition, "k must be at least 1");
  check_labels(row_labels, k, "row");
  check_labels(col_labels, k, "column");
  return PartitionPair(std::move(row_labels), std::move(col_labels), k);
}

PartitionPair PartitionPair::shared(std::vector<int> labels, int k) {
  auto copy = labels;
  return make(std::move(labels), std::move(copy), k);
}

std::vector<Index> PartitionPair::row_cluster(int a) const { return members_of(row_labels_, a); }
std::vector<Index> PartitionPair::col_cluster(int b) const { return members_of(col_labels_, b); }

std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::vector<int> map;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l >= static_cast<int>(map.size())) map.resize(static_cast<std::size_t>(l) + 1, -1);
    if (map[static_cast<std::size_t>(l)] < 0) {
      int next = 0;
      for (int v : map) next += (v >= 0);
      map[static_cast<std::size_t>(l)] = next;
    }
    out[i] = map[static_cast<std::size_t>(l)];
  }
  return out;
}

}  // namespace mwdisc
