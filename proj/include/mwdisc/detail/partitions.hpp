#pragma once

#include <vector>

namespace mwdisc {

namespace detail {

template <typename Visit>
bool rgs_extend(std::vector<int>& labels, int pos, int used, int k, Visit& visit) {
  const int n = static_cast<int>(labels.size());
  if (pos == n) return used == k ? visit(static_cast<const std::vector<int>&>(labels)) : true;
  // not enough positions left to open the remaining labels
  if (k - used > n - pos) return true;
  const int top = used < k ? used : k - 1;
  for (int l = 0; l <= top; ++l) {
    labels[static_cast<std::size_t>(pos)] = l;
    if (!rgs_extend(labels, pos + 1, l == used ? used + 1 : used, k, visit)) return false;
  }
  return true;
}

}  // namespace detail

template <typename Visit>
void for_each_partition(int n, int k, Visit&& visit) {
  if (n < 1 || k < 1 || k > n) return;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  labels[0] = 0;
  detail::rgs_extend(labels, 1, 1, k, visit);
}

}  // namespace mwdisc
