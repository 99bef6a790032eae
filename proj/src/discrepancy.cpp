#include "mwdisc/discrepancy.hpp"

#include "mwdisc/clustering.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>

namespace mwdisc {

std::string_view to_string(Exactness e) noexcept {
  switch (e) {
    case Exactness::Exact: return "exact";
    case Exactness::HeuristicLower: return "heuristic-lower";
    case Exactness::HeuristicEstimate: return "heuristic-estimate";
    case Exactness::UpperBound: return "upper-bound";
  }
  return "unknown";
}

namespace {

// All sums below run on the table exactly as supplied. The term is invariant
// under a global rescale, and integer-valued input keeps every cut and volume
// exact, so blockwise-independent tables evaluate to exactly zero.
struct ClusterPair {
  const Matrix& u;
  const Vector& dr;
  const Vector& dc;
  std::vector<Index> rows;
  std::vector<Index> cols;
  double va = 0.0;
  double vb = 0.0;
  double cab = 0.0;

  ClusterPair(const ContingencyTable& t, std::vector<Index> r, std::vector<Index> c)
      : u(t.unscaled()), dr(t.unscaled_row_sums()), dc(t.unscaled_col_sums()), rows(std::move(r)),
        cols(std::move(c)) {
    for (Index i : rows) va += dr[i];
    for (Index j : cols) vb += dc[j];
    for (Index i : rows) {
      for (Index j : cols) cab += u(i, j);
    }
  }

  double term(double cxy, double vx, double vy) const {
    const double num = std::abs(cxy * va * vb - cab * vx * vy);
    return num / (va * vb * std::sqrt(vx * vy));
  }

  double evaluate(const std::vector<Index>& x, const std::vector<Index>& y) const {
    double cxy = 0.0, vx = 0.0, vy = 0.0;
    for (Index i : x) {
      vx += dr[i];
      for (Index j : y) cxy += u(i, j);
    }
    for (Index j : y) vy += dc[j];
    return term(cxy, vx, vy);
  }
};

std::vector<Index> select(const std::vector<Index>& base, std::uint64_t mask) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if ((mask >> i) & 1U) out.push_back(base[i]);
  }
  return out;
}

void require_axes(const IndexSubset& rows, const IndexSubset& cols, const ContingencyTable& t) {
  if (rows.axis() != Axis::Row || cols.axis() != Axis::Column) {
    throw Error(ErrorCode::InvalidArgument, "expected a row cluster and a column cluster");
  }
  if (rows.members().back() >= t.rows() || cols.members().back() >= t.cols()) {
    throw Error(ErrorCode::IndexOutOfRange, "cluster does not fit the table");
  }
}

std::uint64_t pow2_saturating(std::size_t bits) {
  return bits >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << bits);
}

DiscrepancyCertificate exact_pair(const ClusterPair& cp, const DiscOptions& opt) {
  const std::size_t p = cp.rows.size();
  const std::size_t q = cp.cols.size();
  const std::uint64_t required = pow2_saturating(p + q);
  if (p + q >= 63 || required > opt.budget) {
    throw Error(ErrorCode::BudgetExceeded,
                "exact enumeration needs 2^" + std::to_string(p + q) + " subset pairs, budget is " +
                    std::to_string(opt.budget));
  }
  if (opt.disjoint_only) {
    const Index top = std::max(cp.rows.back(), cp.cols.back());
    if (top >= 64) {
      throw Error(ErrorCode::InvalidArgument, "disjoint-only enumeration supports at most 64 vertices");
    }
  }

  std::vector<double> colsum(q, 0.0);
  double vx = 0.0;
  std::uint64_t xmask = 0, gx = 0;
  double best = -1.0;
  std::uint64_t best_x = 0, best_y = 0;
  const std::uint64_t nx = std::uint64_t{1} << p;
  const std::uint64_t ny = std::uint64_t{1} << q;
  for (std::uint64_t tx = 1; tx < nx; ++tx) {
    const int bit = std::countr_zero(tx);
    xmask ^= std::uint64_t{1} << bit;
    const double sx = ((xmask >> bit) & 1U) ? 1.0 : -1.0;
    const Index row = cp.rows[static_cast<std::size_t>(bit)];
    gx ^= std::uint64_t{1} << (opt.disjoint_only ? row : 0);
    for (std::size_t j = 0; j < q; ++j) colsum[j] += sx * cp.u(row, cp.cols[j]);
    vx += sx * cp.dr[row];

    double cxy = 0.0, vy = 0.0;
    std::uint64_t ymask = 0, gy = 0;
    for (std::uint64_t ty = 1; ty < ny; ++ty) {
      const int b = std::countr_zero(ty);
      ymask ^= std::uint64_t{1} << b;
      const double sy = ((ymask >> b) & 1U) ? 1.0 : -1.0;
      const Index col = cp.cols[static_cast<std::size_t>(b)];
      cxy += sy * colsum[static_cast<std::size_t>(b)];
      vy += sy * cp.dc[col];
      if (opt.disjoint_only) {
        gy ^= std::uint64_t{1} << col;
        if (gx & gy) continue;
      }
      const double v = cp.term(cxy, vx, vy);
      if (v > best) {
        best = v;
        best_x = xmask;
        best_y = ymask;
      }
    }
  }

  DiscrepancyCertificate cert;
  cert.exactness = Exactness::Exact;
  if (best < 0.0) {
    // disjoint-only with no admissible pair (single shared vertex)
    cert.alpha = 0.0;
    return cert;
  }
  cert.witness.rows = select(cp.rows, best_x);
  cert.witness.cols = select(cp.cols, best_y);
  cert.alpha = cp.evaluate(cert.witness.rows, cert.witness.cols);
  return cert;
}

struct SweepResult {
  double value = -1.0;
  std::vector<Index> chosen;
};

// Given the fixed side, order the free side by normalized excess mass and
// score every prefix and suffix of that order.
SweepResult sweep(const ClusterPair& cp, bool free_rows, const std::vector<Index>& fixed,
                  bool disjoint_only) {
  const std::vector<Index>& free = free_rows ? cp.rows : cp.cols;
  const double rho_num = cp.cab;
  const double rho_den = cp.va * cp.vb;
  double vfixed = 0.0;
  for (Index f : fixed) vfixed += free_rows ? cp.dc[f] : cp.dr[f];

  struct Item {
    Index index;
    double mass;
    double weight;
    double score;
  };
  std::vector<Item> items;
  for (Index i : free) {
    if (disjoint_only && std::find(fixed.begin(), fixed.end(), i) != fixed.end()) continue;
    double mass = 0.0;
    for (Index f : fixed) mass += free_rows ? cp.u(i, f) : cp.u(f, i);
    const double w = free_rows ? cp.dr[i] : cp.dc[i];
    const double score = (mass * rho_den - rho_num * w * vfixed) / (w * rho_den);
    items.push_back({i, mass, w, score});
  }
  SweepResult best;
  if (items.empty()) return best;
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.score > b.score; });

  auto scan = [&](auto first, auto last) {
    double cut = 0.0, vol = 0.0;
    std::size_t taken = 0;
    std::size_t best_taken = 0;
    double best_val = -1.0;
    for (auto it = first; it != last; ++it) {
      cut += it->mass;
      vol += it->weight;
      ++taken;
      const double v = free_rows ? cp.term(cut, vol, vfixed) : cp.term(cut, vfixed, vol);
      if (v > best_val) {
        best_val = v;
        best_taken = taken;
      }
    }
    if (best_val > best.value) {
      best.value = best_val;
      best.chosen.clear();
      auto it = first;
      for (std::size_t t = 0; t < best_taken; ++t, ++it) best.chosen.push_back(it->index);
      std::sort(best.chosen.begin(), best.chosen.end());
    }
  };
  scan(items.begin(), items.end());
  scan(items.rbegin(), items.rend());
  return best;
}

DiscrepancyCertificate heuristic_pair(const ClusterPair& cp, int restarts, std::uint64_t seed,
                                      bool disjoint_only) {
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be at least 1");
  Rng rng(seed);
  DiscrepancyCertificate cert;
  cert.exactness = Exactness::HeuristicLower;
  double best = -1.0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<Index> y;
    for (Index j : cp.cols) {
      if (rng.uniform01() < 0.5) y.push_back(j);
    }
    if (y.empty()) y.push_back(cp.cols[rng.uniform_index(cp.cols.size())]);

    double current = -1.0;
    std::vector<Index> x;
    for (int iter = 0; iter < 100; ++iter) {
      SweepResult sx = sweep(cp, true, y, disjoint_only);
      if (sx.value < 0.0) break;
      x = std::move(sx.chosen);
      SweepResult sy = sweep(cp, false, x, disjoint_only);
      if (sy.value < 0.0) break;
      const bool improved = sy.value > current + 1e-15;
      y = std::move(sy.chosen);
      current = sy.value;
      if (current > best) {
        best = current;
        cert.witness.rows = x;
        cert.witness.cols = y;
      }
      if (!improved) break;
    }
  }
  cert.alpha = best < 0.0 ? 0.0 : cp.evaluate(cert.witness.rows, cert.witness.cols);
  return cert;
}

bool symmetric_shared(const ContingencyTable& t, const PartitionPair& p) {
  return p.is_shared() && t.rows() == t.cols() && t.unscaled() == t.unscaled().transpose();
}

}  // namespace

double pair_term(const ContingencyTable& table, const IndexSubset& cluster_rows,
                 const IndexSubset& cluster_cols, const IndexSubset& x, const IndexSubset& y) {
  require_axes(cluster_rows, cluster_cols, table);
  if (x.axis() != Axis::Row || y.axis() != Axis::Column) {
    throw Error(ErrorCode::InvalidArgument, "expected a row subset X and a column subset Y");
  }
  for (Index i : x.members()) {
    if (!cluster_rows.contains(i)) {
      throw Error(ErrorCode::SubsetOutsideCluster, "row " + std::to_string(i) + " is not in R_a");
    }
  }
  for (Index j : y.members()) {
    if (!cluster_cols.contains(j)) {
      throw Error(ErrorCode::SubsetOutsideCluster, "column " + std::to_string(j) + " is not in C_b");
    }
  }
  const ClusterPair cp(table, cluster_rows.members(), cluster_cols.members());
  return cp.evaluate(x.members(), y.members());
}

DiscrepancyCertificate pair_discrepancy_exact(const ContingencyTable& table,
                                              const IndexSubset& cluster_rows,
                                              const IndexSubset& cluster_cols,
                                              const DiscOptions& options) {
  require_axes(cluster_rows, cluster_cols, table);
  return exact_pair(ClusterPair(table, cluster_rows.members(), cluster_cols.members()), options);
}

DiscrepancyCertificate pair_discrepancy_heuristic(const ContingencyTable& table,
                                                  const IndexSubset& cluster_rows,
                                                  const IndexSubset& cluster_cols, int restarts,
                                                  std::uint64_t seed, bool disjoint_only) {
  require_axes(cluster_rows, cluster_cols, table);
  return heuristic_pair(ClusterPair(table, cluster_rows.members(), cluster_cols.members()),
                        restarts, seed, disjoint_only);
}

namespace {

void check_partition_fits(const ContingencyTable& t, const PartitionPair& p) {
  if (static_cast<Index>(p.row_labels().size()) != t.rows() ||
      static_cast<Index>(p.col_labels().size()) != t.cols()) {
    throw Error(ErrorCode::InvalidPartition, "partition does not match the table shape");
  }
}

// Exact for a cluster pair when its enumeration fits the budget, otherwise
// heuristic; reports which one ran through `all_exact`.
DiscrepancyCertificate partition_scan(const ContingencyTable& table, const PartitionPair& p,
                                      std::optional<DiscMode> forced, const DiscOptions& opt,
                                      bool& all_exact) {
  check_partition_fits(table, p);
  const int k = p.k();
  const bool sym = symmetric_shared(table, p);
  DiscrepancyCertificate best;
  best.alpha = -1.0;
  all_exact = true;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (sym && a > b) continue;
      const ClusterPair cp(table, p.row_cluster(a), p.col_cluster(b));
      const std::size_t bits = cp.rows.size() + cp.cols.size();
      const bool fits = bits < 63 && pow2_saturating(bits) <= opt.budget;
      const DiscMode mode = forced ? *forced : (fits ? DiscMode::Exact : DiscMode::Heuristic);
      DiscrepancyCertificate c =
          mode == DiscMode::Exact
              ? exact_pair(cp, opt)
              : heuristic_pair(cp, opt.restarts, opt.seed + static_cast<std::uint64_t>(a * k + b),
                               opt.disjoint_only);
      if (mode != DiscMode::Exact) all_exact = false;
      if (c.alpha > best.alpha) {
        best = std::move(c);
        best.witness.a = a;
        best.witness.b = b;
      }
    }
  }
  best.exactness = all_exact ? Exactness::Exact : Exactness::HeuristicLower;
  return best;
}

}  // namespace

DiscrepancyCertificate partition_discrepancy(const ContingencyTable& table,
                                             const PartitionPair& partition, DiscMode mode,
                                             const DiscOptions& options) {
  bool all_exact = true;
  return partition_scan(table, partition, mode, options, all_exact);
}

std::uint64_t stirling2(int n, int k) {
  if (n < 0 || k < 0) return 0;
  if (k > n) return 0;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      // S(i,j) = j S(i-1,j) + S(i-1,j-1)
      const std::uint64_t a = row[static_cast<std::size_t>(j)];
      const std::uint64_t b = row[static_cast<std::size_t>(j) - 1];
      std::uint64_t prod = 0;
      if (a != 0 && static_cast<std::uint64_t>(j) > kMax / a) {
        prod = kMax;
      } else {
        prod = a * static_cast<std::uint64_t>(j);
      }
      row[static_cast<std::size_t>(j)] = prod > kMax - b ? kMax : prod + b;
    }
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(k)];
}

namespace {

struct MaskKeyHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

std::vector<std::uint64_t> cluster_masks(const std::vector<int>& labels, int k) {
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    masks[static_cast<std::size_t>(labels[i])] |= std::uint64_t{1} << i;
  }
  return masks;
}

std::vector<Index> mask_members(std::uint64_t mask) {
  std::vector<Index> out;
  for (int i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1U) out.push_back(i);
  }
  return out;
}

std::vector<int> random_proper_labels(std::size_t n, int k, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(perm);
  std::vector<int> labels(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    labels[perm[t]] = t < static_cast<std::size_t>(k) ? static_cast<int>(t)
                                                       : static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
  }
  return labels;
}

MinDiscResult min_disc_exact(const ContingencyTable& table, int k, const DiscOptions& opt) {
  const int m = static_cast<int>(table.rows());
  const int n = static_cast<int>(table.cols());
  const bool shared = opt.shared_partition;
  if (m > 64 || n > 64) {
    throw Error(ErrorCode::BudgetExceeded, "exact min_disc supports at most 64 rows and columns");
  }
  const std::uint64_t row_count = stirling2(m, k);
  const std::uint64_t col_count = shared ? 1 : stirling2(n, k);
  const std::uint64_t total =
      col_count != 0 && row_count > std::numeric_limits<std::uint64_t>::max() / col_count
          ? std::numeric_limits<std::uint64_t>::max()
          : row_count * col_count;
  if (total > opt.partition_budget) {
    throw Error(ErrorCode::BudgetExceeded, "exact min_disc needs " + std::to_string(total) +
                                               " partition pairs, budget is " +
                                               std::to_string(opt.partition_budget));
  }
  const std::size_t widest = static_cast<std::size_t>(m - k + 1 + n - k + 1);
  if (widest >= 63 || pow2_saturating(widest) > opt.budget) {
    throw Error(ErrorCode::BudgetExceeded,
                "largest cluster pair needs 2^" + std::to_string(widest) + " subset pairs");
  }

  std::vector<std::vector<int>> row_parts;
  for_each_partition(m, k, [&](const std::vector<int>& l) {
    row_parts.push_back(l);
    return true;
  });
  std::vector<std::vector<int>> col_parts;
  if (!shared) {
    for_each_partition(n, k, [&](const std::vector<int>& l) {
      col_parts.push_back(l);
      return true;
    });
  }

  const bool sym_table = table.rows() == table.cols() && table.unscaled() == table.unscaled().transpose();
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, double, MaskKeyHash> cache;
  auto pair_value = [&](std::uint64_t rmask, std::uint64_t cmask) {
    const auto key = std::make_pair(rmask, cmask);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double v = exact_pair(ClusterPair(table, mask_members(rmask), mask_members(cmask)), opt).alpha;
    cache.emplace(key, v);
    return v;
  };

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_r = 0, best_c = 0;
  bool done = false;
  for (std::size_t r = 0; r < row_parts.size() && !done; ++r) {
    const auto rmasks = cluster_masks(row_parts[r], k);
    const std::size_t ncols = shared ? 1 : col_parts.size();
    for (std::size_t c = 0; c < ncols && !done; ++c) {
      const auto cmasks = shared ? rmasks : cluster_masks(col_parts[c], k);
      double running = 0.0;
      bool pruned = false;
      for (int a = 0; a < k && !pruned; ++a) {
        for (int b = 0; b < k; ++b) {
          if (shared && sym_table && a > b) continue;
          running = std::max(running, pair_value(rmasks[static_cast<std::size_t>(a)],
                                                 cmasks[static_cast<std::size_t>(b)]));
          if (running >= best) {
            pruned = true;
            break;
          }
        }
      }
      if (!pruned && running < best) {
        best = running;
        best_r = r;
        best_c = c;
        if (best == 0.0) done = true;
      }
    }
  }

  PartitionPair part = shared ? PartitionPair::shared(row_parts[best_r], k)
                              : PartitionPair::make(row_parts[best_r], col_parts[best_c], k);
  bool all_exact = true;
  DiscrepancyCertificate cert = partition_scan(table, part, DiscMode::Exact, opt, all_exact);
  cert.exactness = Exactness::Exact;
  return MinDiscResult{std::move(cert), std::move(part)};
}

MinDiscResult min_disc_heuristic(const ContingencyTable& table, int k, const DiscOptions& opt) {
  const std::size_t m = static_cast<std::size_t>(table.rows());
  const std::size_t n = static_cast<std::size_t>(table.cols());
  std::vector<PartitionPair> candidates;
  try {
    if (opt.shared_partition) {
      const WeightedGraph g = WeightedGraph::make(table.unscaled(), false);
      candidates.push_back(spectral_partition_pipeline(g, k, std::max(opt.restarts, 1), opt.seed).partition);
    } else {
      candidates.push_back(
          spectral_partition_pipeline(table, k, std::max(opt.restarts, 1), opt.seed).partition);
    }
  } catch (const Error&) {
    // spectral route unavailable (decomposable input, repeated points, ...)
  }
  Rng rng(opt.seed ^ 0xD1B54A32D192ED03ULL);
  for (int r = 0; r < opt.restarts; ++r) {
    auto rl = random_proper_labels(m, k, rng);
    if (opt.shared_partition) {
      candidates.push_back(PartitionPair::shared(std::move(rl), k));
    } else {
      candidates.push_back(PartitionPair::make(std::move(rl), random_proper_labels(n, k, rng), k));
    }
  }

  std::optional<MinDiscResult> best;
  bool best_exact = false;
  for (const PartitionPair& p : candidates) {
    bool all_exact = true;
    DiscrepancyCertificate c = partition_scan(table, p, std::nullopt, opt, all_exact);
    if (!best || c.alpha < best->certificate.alpha) {
      best = MinDiscResult{std::move(c), p};
      best_exact = all_exact;
    }
  }
  // an exactly scored partition upper-bounds the minimum
  best->certificate.exactness = best_exact ? Exactness::UpperBound : Exactness::HeuristicEstimate;
  return std::move(*best);
}

}  // namespace

MinDiscResult min_disc(const ContingencyTable& table, int k, DiscMode mode, const DiscOptions& options) {
  if (k < 1 || k > table.rows() || k > table.cols()) {
    throw Error(ErrorCode::KExceedsRank, "k=" + std::to_string(k) +
                                             " cannot split " + std::to_string(table.rows()) + " rows and " +
                                             std::to_string(table.cols()) + " columns into proper partitions");
  }
  if (options.shared_partition && table.rows() != table.cols()) {
    throw Error(ErrorCode::InvalidArgument, "a shared partition needs a square table");
  }
  return mode == DiscMode::Exact ? min_disc_exact(table, k, options)
                                 : min_disc_heuristic(table, k, options);
}

}  // namespace mwdisc
