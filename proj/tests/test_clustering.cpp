#include "mwdisc/clustering.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/random.hpp"

#include <doctest.h>

using namespace mwdisc;

namespace {

// Brute-force weighted within-cluster sum of squares over all labelings.
double oracle_k_variance(const Matrix& pts, const Vector& w, int k) {
  const Index n = pts.rows();
  std::vector<int> lab(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> mass(static_cast<std::size_t>(k), 0.0);
    Matrix sum = Matrix::Zero(k, pts.cols());
    for (Index i = 0; i < n; ++i) {
      mass[static_cast<std::size_t>(lab[static_cast<std::size_t>(i)])] += w[i];
      sum.row(lab[static_cast<std::size_t>(i)]) += w[i] * pts.row(i);
    }
    if (std::all_of(mass.begin(), mass.end(), [](double x) { return x > 0.0; })) {
      double obj = 0.0;
      for (Index i = 0; i < n; ++i) {
        const int a = lab[static_cast<std::size_t>(i)];
        obj += w[i] * (pts.row(i) - sum.row(a) / mass[static_cast<std::size_t>(a)]).squaredNorm();
      }
      best = std::min(best, obj);
    }
    Index i = 0;
    while (i < n && ++lab[static_cast<std::size_t>(i)] == k) lab[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return best;
}

Representatives random_reps(Index n, Index dim, Rng& rng) {
  Representatives r;
  r.points.resize(n, dim);
  r.weights.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index d = 0; d < dim; ++d) r.points(i, d) = rng.normal();
    r.weights[i] = rng.uniform(0.1, 1.0);
  }
  r.weights /= r.weights.sum();
  return r;
}

Matrix densities(int k) {
  Matrix d = Matrix::Constant(k, k, 1.0);
  d.diagonal().setConstant(4.0);
  return d;
}

}  // namespace

TEST_CASE("exhaustive k-variance matches brute force") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = rng.uniform_int(3, 7);
    const int k = static_cast<int>(rng.uniform_int(1, 3));
    const auto reps = random_reps(n, 2, rng);
    const auto ex = exact_k_variance(reps, k);
    CHECK(ex.s_k_squared == doctest::Approx(oracle_k_variance(reps.points, reps.weights, k)).epsilon(1e-12));
    CHECK(weighted_objective(reps, ex.labels, k) == doctest::Approx(ex.s_k_squared).epsilon(1e-12));
  }
}

TEST_CASE("k-means never beats the exhaustive optimum and finds it on separated data") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto reps = random_reps(8, 2, rng);
    const auto km = weighted_kmeans(reps, 3, 10, 1);
    const auto ex = exact_k_variance(reps, 3);
    CHECK(km.s_k_squared >= ex.s_k_squared - 1e-12);
  }
  Representatives sep;
  sep.points.resize(6, 1);
  sep.points << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
  sep.weights = Vector::Constant(6, 1.0 / 6.0);
  const auto km = weighted_kmeans(sep, 2, 5, 0);
  CHECK(canonical_labels(km.labels) == std::vector<int>{0, 0, 0, 1, 1, 1});
  CHECK(km.s_k_squared == doctest::Approx(exact_k_variance(sep, 2).s_k_squared));
}

TEST_CASE("k-means is deterministic for a seed") {
  Rng rng(43);
  const auto reps = random_reps(30, 3, rng);
  const auto a = weighted_kmeans(reps, 4, 8, 99);
  const auto b = weighted_kmeans(reps, 4, 8, 99);
  CHECK(a.labels == b.labels);
  CHECK(a.s_k_squared == b.s_k_squared);
  CHECK(a.restart == b.restart);
}

TEST_CASE("k-means errors") {
  Representatives dup;
  dup.points = Matrix::Zero(4, 1);
  dup.points(3, 0) = 1.0;
  dup.weights = Vector::Constant(4, 0.25);
  try {
    weighted_kmeans(dup, 3, 3, 0);
    FAIL("expected DegenerateInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateInput);
  }
  Rng rng(44);
  const auto big = random_reps(17, 1, rng);
  CHECK_THROWS_AS(exact_k_variance(big, 2), Error);
}

TEST_CASE("table pipeline recovers an exact block structure") {
  const auto planted = block_table(10, 9, 3, {0.3, 0.3, 0.4}, {0.3, 0.3, 0.4}, densities(3), 0.0, 8);
  const auto res = spectral_partition_pipeline(planted.table, 3, 10, 0);
  CHECK(res.s_row <= 1e-7);
  CHECK(res.s_col <= 1e-7);
  CHECK(res.s_k <= 1e-9);
  CHECK(canonical_labels(res.partition.row_labels()) == canonical_labels(planted.partition.row_labels()));
  CHECK(canonical_labels(res.partition.col_labels()) == canonical_labels(planted.partition.col_labels()));
  CHECK(res.back_estimate == doctest::Approx(std::sqrt(6.0) * (res.s_row + res.s_col) + res.s_k));
}

TEST_CASE("graph pipeline separates the sides of a biregular graph") {
  const auto g = bipartite_biregular(6, 4, 2, 3, 1);
  const auto res = spectral_partition_pipeline(g.graph, 2, 10, 0);
  CHECK(res.s_row <= 1e-9);
  CHECK(canonical_labels(res.partition.row_labels()) == canonical_labels(g.labels));
  CHECK(res.partition.is_shared());
}

TEST_CASE("representatives reject k beyond the rank") {
  Matrix raw = Matrix::Ones(3, 3);
  raw(0, 0) = 2.0;
  const auto nt = normalize(ContingencyTable::build(raw));
  const Spectrum s = nontrivial_spectrum(nt);
  try {
    representatives(nt, s, 4);
    FAIL("expected KExceedsRank");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KExceedsRank);
  }
  CHECK(representatives(nt, s, 2).rows.points.cols() == 1);
}
