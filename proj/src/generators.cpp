#include "mwdisc/generators.hpp"

#include "mwdisc/error.hpp"
#include "mwdisc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mwdisc {

PatternMatrix PatternMatrix::make(Matrix p) {
  if (p.rows() != p.cols() || p.rows() < 1) {
    throw Error(ErrorCode::InvalidArgument, "pattern matrix must be square and nonempty");
  }
  if (!p.allFinite() || (p.array() < 0.0).any() || (p.array() > 1.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "pattern entries must lie in [0, 1]");
  }
  if (p != p.transpose()) throw Error(ErrorCode::InvalidArgument, "pattern matrix must be symmetric");
  return PatternMatrix(std::move(p));
}

namespace {

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v[i]);
  return out;
}

std::vector<double> checked_proportions(const std::vector<double>& p, std::size_t k, const char* what) {
  if (p.size() != k) {
    throw Error(ErrorCode::DegenerateParameters, std::string(what) + " needs one proportion per cluster");
  }
  double sum = 0.0;
  for (double x : p) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::DegenerateParameters, std::string(what) + " must be positive");
    }
    sum += x;
  }
  std::vector<double> out(p);
  for (double& x : out) x /= sum;
  return out;
}

std::vector<int> planted_labels(const std::vector<Index>& sizes, Rng& rng) {
  std::vector<int> labels;
  for (std::size_t a = 0; a < sizes.size(); ++a) labels.insert(labels.end(), static_cast<std::size_t>(sizes[a]), static_cast<int>(a));
  rng.shuffle(labels);
  return labels;
}

bool blocks_connected(const Matrix& p) {
  const Index k = p.rows();
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  std::vector<Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const Index a = stack.back();
    stack.pop_back();
    for (Index b = 0; b < k; ++b) {
      if (p(a, b) > 0.0 && !seen[static_cast<std::size_t>(b)]) {
        seen[static_cast<std::size_t>(b)] = true;
        stack.push_back(b);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

}  // namespace

std::vector<Index> apportion(Index n, const std::vector<double>& proportions) {
  const Index k = static_cast<Index>(proportions.size());
  if (k < 1 || n < k) throw Error(ErrorCode::DegenerateParameters, "cannot give every cluster a member");
  const double spare = static_cast<double>(n - k);
  std::vector<Index> sizes(static_cast<std::size_t>(k), 1);
  std::vector<std::pair<double, Index>> rem;
  Index used = k;
  for (Index a = 0; a < k; ++a) {
    const double quota = spare * proportions[static_cast<std::size_t>(a)];
    const Index whole = static_cast<Index>(std::floor(quota));
    sizes[static_cast<std::size_t>(a)] += whole;
    used += whole;
    rem.emplace_back(quota - static_cast<double>(whole), a);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; used < n; ++i, ++used) ++sizes[static_cast<std::size_t>(rem[i % rem.size()].second)];
  return sizes;
}

PlantedGraph generalized_random_graph(Index n, const std::vector<double>& proportions,
                                      const PatternMatrix& pattern, std::uint64_t seed) {
  const int k = pattern.k();
  if (n < 2 * k) throw Error(ErrorCode::DegenerateParameters, "n must be at least 2k");
  const std::vector<double> props = checked_proportions(proportions, static_cast<std::size_t>(k), "proportions");
  Rng rng(seed);
  const std::vector<int> labels = planted_labels(apportion(n, props), rng);
  const Matrix& p = pattern.probabilities();
  Matrix w = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)]))) {
        w(i, j) = w(j, i) = 1.0;
      }
    }
  }
  GeneratorInfo info{"grg", seed, {{"n", std::to_string(n)}, {"proportions", list(props)}}, {}};
  std::string pat;
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) pat += (a || b ? "," : "") + num(p(a, b));
  }
  info.parameters["pattern"] = pat;
  if (!blocks_connected(p)) info.warnings.push_back("pattern block graph is disconnected; the sample is disconnected");
  for (Index a = 0; a < k; ++a) {
    if (p.row(a).maxCoeff() == 0.0) info.warnings.push_back("cluster " + std::to_string(a) + " has no edges");
  }
  return PlantedGraph{WeightedGraph::make(std::move(w)), labels, k, std::move(info)};
}

namespace {

// Stub matching; left stubs in order, right stubs shuffled.
std::vector<std::pair<Index, Index>> match_stubs(Index n1, Index n2, Index k1, Index k2, Rng& rng) {
  std::vector<Index> right;
  right.reserve(static_cast<std::size_t>(n2 * k2));
  for (Index v = 0; v < n2; ++v) right.insert(right.end(), static_cast<std::size_t>(k2), v);
  rng.shuffle(right);
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(right.size());
  std::size_t s = 0;
  for (Index u = 0; u < n1; ++u) {
    for (Index r = 0; r < k1; ++r) edges.emplace_back(u, right[s++]);
  }
  return edges;
}

Eigen::MatrixXi multiplicity(const std::vector<std::pair<Index, Index>>& edges, Index n1, Index n2) {
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(n1, n2);
  for (const auto& [u, v] : edges) ++c(u, v);
  return c;
}

// Swap endpoints of a repeated edge with a random other edge until simple.
bool repair(std::vector<std::pair<Index, Index>>& edges, Index n1, Index n2, Rng& rng) {
  Eigen::MatrixXi c = multiplicity(edges, n1, n2);
  const std::size_t cap = 100 * edges.size() + 1000;
  for (std::size_t step = 0; step < cap; ++step) {
    std::size_t bad = edges.size();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (c(edges[e].first, edges[e].second) > 1) {
        bad = e;
        break;
      }
    }
    if (bad == edges.size()) return true;
    const std::size_t other = rng.uniform_index(edges.size());
    auto& [u1, v1] = edges[bad];
    auto& [u2, v2] = edges[other];
    if (u1 == u2 || v1 == v2 || c(u1, v2) > 0 || c(u2, v1) > 0) continue;
    --c(u1, v1);
    --c(u2, v2);
    std::swap(v1, v2);
    ++c(u1, v1);
    ++c(u2, v2);
  }
  return false;
}

Matrix bipartite_weights(const Eigen::MatrixXi& c, Index n1, Index n2) {
  Matrix w = Matrix::Zero(n1 + n2, n1 + n2);
  for (Index u = 0; u < n1; ++u) {
    for (Index v = 0; v < n2; ++v) {
      if (c(u, v) > 0) w(u, n1 + v) = w(n1 + v, u) = 1.0;
    }
  }
  return w;
}

}  // namespace

PlantedGraph bipartite_biregular(Index n1, Index n2, Index k1, Index k2, std::uint64_t seed) {
  if (n1 < 1 || n2 < 1 || k1 < 1 || k2 < 1) throw Error(ErrorCode::InfeasibleDegrees, "sizes and degrees must be positive");
  if (n1 * k1 != n2 * k2) throw Error(ErrorCode::InfeasibleDegrees, "n1*k1 must equal n2*k2");
  if (k1 > n2 || k2 > n1) throw Error(ErrorCode::InfeasibleDegrees, "a degree exceeds the opposite side");
  if (n1 * k1 < n1 + n2 - 1) throw Error(ErrorCode::InfeasibleDegrees, "too few edges for a connected graph");

  GeneratorInfo info{"biregular", seed,
                     {{"n1", std::to_string(n1)}, {"n2", std::to_string(n2)}, {"k1", std::to_string(k1)}, {"k2", std::to_string(k2)}},
                     {}};
  std::vector<int> labels(static_cast<std::size_t>(n1 + n2), 0);
  std::fill(labels.begin() + n1, labels.end(), 1);

  if (k1 == n2) {
    // the complete bipartite graph is the only realization
    const Eigen::MatrixXi all = Eigen::MatrixXi::Ones(n1, n2);
    return PlantedGraph{WeightedGraph::make(bipartite_weights(all, n1, n2)), labels, 2, std::move(info)};
  }

  Rng rng(seed);
  for (int attempt = 0; attempt < 2000; ++attempt) {
    std::vector<std::pair<Index, Index>> edges = match_stubs(n1, n2, k1, k2, rng);
    if (attempt >= 1000 && !repair(edges, n1, n2, rng)) continue;
    const Eigen::MatrixXi c = multiplicity(edges, n1, n2);
    if (c.maxCoeff() > 1) continue;
    WeightedGraph g = WeightedGraph::make(bipartite_weights(c, n1, n2));
    if (!g.is_connected()) continue;
    if (attempt >= 1000) info.warnings.push_back("built by edge-swap repair");
    return PlantedGraph{std::move(g), labels, 2, std::move(info)};
  }
  throw Error(ErrorCode::GenerationFailed, "no connected simple sample after rejection and repair");
}

PlantedTable block_table(Index m, Index n, int k, const std::vector<double>& row_proportions,
                         const std::vector<double>& col_proportions, const Matrix& densities,
                         double epsilon, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::DegenerateParameters, "k must be at least 1");
  if (densities.rows() != k || densities.cols() != k) {
    throw Error(ErrorCode::DegenerateParameters, "densities must be k x k");
  }
  if (!densities.allFinite() || (densities.array() <= 0.0).any()) {
    throw Error(ErrorCode::DegenerateParameters, "densities must be positive");
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::DegenerateParameters, "epsilon must lie in [0, 1) to keep entries positive");
  }
  const auto rp = checked_proportions(row_proportions, static_cast<std::size_t>(k), "row proportions");
  const auto cp = checked_proportions(col_proportions, static_cast<std::size_t>(k), "column proportions");
  Rng rng(seed);
  std::vector<int> rl = planted_labels(apportion(m, rp), rng);
  std::vector<int> cl = planted_labels(apportion(n, cp), rng);
  Vector r(m);
  Vector c(n);
  for (Index i = 0; i < m; ++i) r[i] = static_cast<double>(rng.uniform_int(1, 4));
  for (Index j = 0; j < n; ++j) c[j] = static_cast<double>(rng.uniform_int(1, 4));
  Matrix raw(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      raw(i, j) = r[i] * densities(rl[static_cast<std::size_t>(i)], cl[static_cast<std::size_t>(j)]) * c[j];
    }
  }
  if (epsilon > 0.0) {
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) raw(i, j) *= 1.0 + epsilon * rng.uniform(-1.0, 1.0);
    }
  }
  GeneratorInfo info{"block", seed,
                     {{"m", std::to_string(m)}, {"n", std::to_string(n)}, {"k", std::to_string(k)},
                      {"row_proportions", list(rp)}, {"col_proportions", list(cp)}, {"epsilon", num(epsilon)}},
                     {}};
  std::string dens;
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) dens += (a || b ? "," : "") + num(densities(a, b));
  }
  info.parameters["densities"] = dens;
  ContingencyTable table = ContingencyTable::build(raw);
  return PlantedTable{std::move(raw), std::move(table), PartitionPair::make(std::move(rl), std::move(cl), k), std::move(info)};
}

}  // namespace mwdisc
