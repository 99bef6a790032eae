#include "mwdisc/clustering.hpp"

#include "mwdisc/discrepancy.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mwdisc {

RepresentativePair representatives(const NormalizedTable& table, const Spectrum& spectrum, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  std::vector<Index> picked;
  for (Index i = 0; i < spectrum.size() && static_cast<int>(picked.size()) < k - 1; ++i) {
    if (spectrum.trivial_index && *spectrum.trivial_index == i) continue;
    picked.push_back(i);
  }
  if (static_cast<int>(picked.size()) < k - 1) {
    throw Error(ErrorCode::KExceedsRank, "only " + std::to_string(picked.size()) +
                                             " nontrivial singular pairs for k=" + std::to_string(k));
  }
  const ContingencyTable& src = table.source();
  const Vector inv_r = src.row_sums().cwiseSqrt().cwiseInverse();
  const Vector inv_c = src.col_sums().cwiseSqrt().cwiseInverse();
  RepresentativePair out;
  out.rows.points.resize(src.rows(), k - 1);
  out.cols.points.resize(src.cols(), k - 1);
  for (int d = 0; d < k - 1; ++d) {
    const Index i = picked[static_cast<std::size_t>(d)];
    out.rows.points.col(d) = inv_r.cwiseProduct(spectrum.left.col(i));
    out.cols.points.col(d) = inv_c.cwiseProduct(spectrum.right.col(i));
  }
  out.rows.weights = src.row_sums();
  out.cols.weights = src.col_sums();
  out.rows.source = "D_row^{-1/2} v_1..v_{k-1}";
  out.cols.source = "D_col^{-1/2} u_1..u_{k-1}";
  return out;
}

Representatives representatives(const ModularityDecomposition& decomposition, int k) {
  const ModularitySpectrum& spec = decomposition.spectrum;
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (k - 1 > spec.size() - 1) {
    throw Error(ErrorCode::KExceedsRank, "k=" + std::to_string(k) + " exceeds the vertex count");
  }
  const Vector inv = decomposition.degrees.cwiseSqrt().cwiseInverse();
  Representatives r;
  r.points.resize(spec.size(), k - 1);
  for (int d = 0; d < k - 1; ++d) r.points.col(d) = inv.cwiseProduct(spec.vectors.col(d));
  r.weights = decomposition.degrees;
  r.source = "D^{-1/2} u_1..u_{k-1}";
  return r;
}

namespace {

Matrix weighted_centers(const Representatives& reps, const std::vector<int>& labels, int k,
                        Vector& mass) {
  Matrix centers = Matrix::Zero(k, reps.points.cols());
  mass = Vector::Zero(k);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const Index i = static_cast<Index>(j);
    centers.row(labels[j]) += reps.weights[i] * reps.points.row(i);
    mass[labels[j]] += reps.weights[i];
  }
  for (int a = 0; a < k; ++a) {
    if (mass[a] > 0.0) centers.row(a) /= mass[a];
  }
  return centers;
}

Index count_distinct(const Matrix& points) {
  const Index n = points.rows();
  Index distinct = 0;
  for (Index i = 0; i < n; ++i) {
    bool seen = false;
    for (Index j = 0; j < i && !seen; ++j) seen = points.row(i) == points.row(j);
    if (!seen) ++distinct;
  }
  return distinct;
}

void check_reps(const Representatives& reps, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (reps.weights.size() != reps.points.rows()) {
    throw Error(ErrorCode::InvalidArgument, "one weight per point is required");
  }
  if ((reps.weights.array() <= 0.0).any()) {
    throw Error(ErrorCode::InvalidArgument, "weights must be positive");
  }
}

}  // namespace

double weighted_objective(const Representatives& reps, const std::vector<int>& labels, int k) {
  Vector mass;
  const Matrix centers = weighted_centers(reps, labels, k, mass);
  double total = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const Index i = static_cast<Index>(j);
    total += reps.weights[i] * (reps.points.row(i) - centers.row(labels[j])).squaredNorm();
  }
  return total;
}

KMeansResult weighted_kmeans(const Representatives& reps, int k, int restarts, std::uint64_t seed) {
  check_reps(reps, k);
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be at least 1");
  const Index n = reps.points.rows();
  if (k > count_distinct(reps.points)) {
    throw Error(ErrorCode::DegenerateInput,
                "k=" + std::to_string(k) + " exceeds the number of distinct points");
  }

  KMeansResult best;
  best.s_k_squared = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(r));

    // weighted k-means++ seeding
    Matrix centers(k, reps.points.cols());
    Vector dist2 = Vector::Constant(n, std::numeric_limits<double>::infinity());
    auto draw = [&](const Vector& mass) {
      const double total = mass.sum();
      double target = rng.uniform01() * total;
      for (Index i = 0; i < n; ++i) {
        target -= mass[i];
        if (target < 0.0 && mass[i] > 0.0) return i;
      }
      for (Index i = n - 1; i >= 0; --i) {
        if (mass[i] > 0.0) return i;
      }
      return Index{0};
    };
    for (int a = 0; a < k; ++a) {
      const Index pick = a == 0 ? draw(reps.weights) : draw(reps.weights.cwiseProduct(dist2));
      centers.row(a) = reps.points.row(pick);
      for (Index i = 0; i < n; ++i) {
        dist2[i] = std::min(dist2[i], (reps.points.row(i) - centers.row(a)).squaredNorm());
      }
    }

    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    int reseeds = 0;
    for (int iter = 0; iter < 300; ++iter) {
      bool changed = false;
      for (Index i = 0; i < n; ++i) {
        int arg = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int a = 0; a < k; ++a) {
          const double d = (reps.points.row(i) - centers.row(a)).squaredNorm();
          if (d < bd) {
            bd = d;
            arg = a;
          }
        }
        if (labels[static_cast<std::size_t>(i)] != arg) {
          labels[static_cast<std::size_t>(i)] = arg;
          changed = true;
        }
      }
      Vector mass;
      centers = weighted_centers(reps, labels, k, mass);
      bool reseeded = false;
      for (int a = 0; a < k; ++a) {
        if (mass[a] > 0.0) continue;
        if (++reseeds > 10) {
          throw Error(ErrorCode::EmptyClusterUnrecoverable, "cluster stayed empty after 10 reseeds");
        }
        // the point worst served by its own center takes over the empty cluster
        Index far = -1;
        double fd = -1.0;
        for (Index i = 0; i < n; ++i) {
          const int li = labels[static_cast<std::size_t>(i)];
          if (mass[li] <= reps.weights[i]) continue;  // would empty its own cluster
          const double d = reps.weights[i] * (reps.points.row(i) - centers.row(li)).squaredNorm();
          if (d > fd) {
            fd = d;
            far = i;
          }
        }
        if (far < 0) continue;
        mass[labels[static_cast<std::size_t>(far)]] -= reps.weights[far];
        labels[static_cast<std::size_t>(far)] = a;
        centers = weighted_centers(reps, labels, k, mass);
        reseeded = true;
      }
      if (!changed && !reseeded) break;
    }

    Vector mass;
    weighted_centers(reps, labels, k, mass);
    if ((mass.array() <= 0.0).any()) {
      throw Error(ErrorCode::EmptyClusterUnrecoverable, "k-means ended with an empty cluster");
    }
    const double obj = weighted_objective(reps, labels, k);
    if (obj < best.s_k_squared) {
      best.s_k_squared = obj;
      best.labels = labels;
      best.restart = r;
    }
  }
  Vector mass;
  best.centers = weighted_centers(reps, best.labels, k, mass);
  return best;
}

KMeansResult exact_k_variance(const Representatives& reps, int k) {
  check_reps(reps, k);
  const int n = static_cast<int>(reps.points.rows());
  if (k > n) throw Error(ErrorCode::DegenerateInput, "k exceeds the number of points");
  if (n > 16) throw Error(ErrorCode::BudgetExceeded, "exhaustive k-variance supports at most 16 points");
  KMeansResult best;
  best.s_k_squared = std::numeric_limits<double>::infinity();
  for_each_partition(n, k, [&](const std::vector<int>& labels) {
    const double obj = weighted_objective(reps, labels, k);
    if (obj < best.s_k_squared) {
      best.s_k_squared = obj;
      best.labels = labels;
    }
    return true;
  });
  Vector mass;
  best.centers = weighted_centers(reps, best.labels, k, mass);
  return best;
}

PipelineResult spectral_partition_pipeline(const ContingencyTable& table, int k, int restarts,
                                           std::uint64_t seed) {
  if (k < 1 || k > table.rows() || k > table.cols()) {
    throw Error(ErrorCode::KExceedsRank, "k=" + std::to_string(k) + " does not fit the table");
  }
  const NormalizedTable nt = normalize(table);
  const Spectrum spec = nontrivial_spectrum(nt);
  const RepresentativePair reps = representatives(nt, spec, k);
  KMeansResult rows = weighted_kmeans(reps.rows, k, restarts, seed);
  KMeansResult cols = weighted_kmeans(reps.cols, k, restarts, seed + 1);
  PipelineResult out{PartitionPair::make(rows.labels, cols.labels, k), 0.0, 0.0, 0.0, 0.0, {}, {}};
  out.s_row = std::sqrt(std::max(0.0, rows.s_k_squared));
  out.s_col = std::sqrt(std::max(0.0, cols.s_k_squared));
  out.s_k = spec.s(k);
  out.back_estimate = std::sqrt(2.0 * k) * (out.s_row + out.s_col) + out.s_k;
  out.row_fit = std::move(rows);
  out.col_fit = std::move(cols);
  return out;
}

PipelineResult spectral_partition_pipeline(const WeightedGraph& graph, int k, int restarts,
                                           std::uint64_t seed) {
  if (k < 1 || k > graph.size()) {
    throw Error(ErrorCode::KExceedsRank, "k=" + std::to_string(k) + " exceeds the vertex count");
  }
  const ModularityDecomposition dec = normalized_modularity(graph);
  const Representatives reps = representatives(dec, k);
  KMeansResult fit = weighted_kmeans(reps, k, restarts, seed);
  PipelineResult out{PartitionPair::shared(fit.labels, k), 0.0, 0.0, 0.0, 0.0, {}, {}};
  out.s_row = std::sqrt(std::max(0.0, fit.s_k_squared));
  out.s_col = out.s_row;
  out.s_k = dec.spectrum.s(k);
  out.back_estimate = std::sqrt(2.0 * k) * out.s_row + out.s_k;
  out.row_fit = fit;
  out.col_fit = std::move(fit);
  return out;
}

}  // namespace mwdisc
