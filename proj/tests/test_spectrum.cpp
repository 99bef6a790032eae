#include "mwdisc/error.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/random.hpp"
#include "mwdisc/spectrum.hpp"

#include <Eigen/SVD>
#include <doctest.h>

using namespace mwdisc;

namespace {

Matrix gaussian(Index m, Index n, Rng& rng) {
  Matrix a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a;
}

Matrix complete(Index n) { return Matrix::Ones(n, n) - Matrix::Identity(n, n); }

}  // namespace

TEST_CASE("jacobi svd agrees with eigen") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Index m = rng.uniform_int(1, 12);
    const Index n = rng.uniform_int(1, 12);
    const Matrix a = gaussian(m, n, rng);
    const Spectrum s = svd_full(a);
    Eigen::JacobiSVD<Matrix> ref(a);
    const Index p = std::min(m, n);
    REQUIRE(s.size() == p);
    for (Index i = 0; i < p; ++i) CHECK(std::abs(s.values[i] - ref.singularValues()[i]) < 1e-12);
    CHECK((s.left.transpose() * s.left - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((s.right.transpose() * s.right - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((s.left * s.values.asDiagonal() * s.right.transpose() - a).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("closed-form singular values") {
  CHECK(svd_full(Matrix::Identity(2, 2)).values == Vector::Ones(2));
  const Spectrum c = svd_full(Matrix::Constant(2, 3, 1.0 / std::sqrt(6.0)));
  CHECK(c.size() == 2);
  CHECK(c.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(c.values[1]) < 1e-14);
  Matrix m(2, 2);
  m << 3, 0,
       4, 5;
  const Spectrum s = svd_full(m);
  CHECK(s.values[0] == doctest::Approx(std::sqrt(45.0)).epsilon(1e-14));
  CHECK(s.values[1] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("singular values sorted and left vectors oriented") {
  Rng rng(3);
  const Matrix a = gaussian(7, 5, rng);
  const Spectrum s = svd_full(a);
  for (Index i = 1; i < s.size(); ++i) CHECK(s.values[i - 1] >= s.values[i]);
  for (Index k = 0; k < s.size(); ++k) {
    Index arg = 0;
    s.left.col(k).cwiseAbs().maxCoeff(&arg);
    CHECK(s.left(arg, k) > 0.0);
  }
}

TEST_CASE("non-finite input is refused") {
  Matrix a = Matrix::Ones(2, 2);
  a(0, 1) = std::nan("");
  CHECK_THROWS_AS(svd_full(a), Error);
}

TEST_CASE("trivial pair is found in the normalized table") {
  Matrix raw(3, 4);
  raw << 1, 2, 0, 1,
         3, 1, 1, 0,
         0, 2, 5, 1;
  const auto t = ContingencyTable::build(raw);
  const Spectrum s = nontrivial_spectrum(normalize(t));
  REQUIRE(s.trivial_index.has_value());
  CHECK(*s.trivial_index == 0);
  CHECK(std::abs(s.values[0] - 1.0) < 1e-12);
  CHECK(s.values[1] < 1.0);
}

TEST_CASE("exact block table has rank k") {
  Matrix d(2, 2);
  d << 4, 1,
       1, 4;
  const auto planted = block_table(6, 7, 2, {0.5, 0.5}, {0.5, 0.5}, d, 0.0, 1);
  const Spectrum s = nontrivial_spectrum(normalize(planted.table));
  CHECK(std::abs(s.values[0] - 1.0) < 1e-12);
  CHECK(s.values[1] < 1.0 - 1e-3);
  CHECK(s.s(2) <= 1e-9);
  Matrix uniform = Matrix::Ones(2, 3);
  const Spectrum u = nontrivial_spectrum(normalize(ContingencyTable::build(uniform)));
  CHECK(std::abs(u.s(1)) < 1e-12);
  CHECK(std::abs(u.left(0, 0) - std::sqrt(0.5)) < 1e-12);
  CHECK(std::abs(u.right(2, 0) - std::sqrt(1.0 / 3.0)) < 1e-12);
}

TEST_CASE("complete graph modularity spectrum") {
  for (Index n = 3; n <= 7; ++n) {
    const auto dec = normalized_modularity(WeightedGraph::make(complete(n)));
    for (Index k = 1; k < n; ++k) CHECK(std::abs(dec.spectrum.mu(k) + 1.0 / static_cast<double>(n - 1)) < 1e-12);
    CHECK(dec.identity_residual < 1e-14);
    CHECK(dec.spectrum.s(0) == 1.0);
  }
}

TEST_CASE("modularity spectrum matches adjacency spectrum without the trivial one") {
  Rng rng(5);
  Matrix w = Matrix::Zero(8, 8);
  for (Index i = 0; i < 8; ++i)
    for (Index j = i + 1; j < 8; ++j) w(i, j) = w(j, i) = rng.uniform(0.1, 1.0);
  const auto dec = normalized_modularity(WeightedGraph::make(w));
  Eigen::SelfAdjointEigenSolver<Matrix> ref(dec.normalized_adjacency);
  std::vector<double> adj(ref.eigenvalues().data(), ref.eigenvalues().data() + 8);
  std::sort(adj.begin(), adj.end());
  CHECK(std::abs(adj.back() - 1.0) < 1e-12);
  adj.pop_back();
  std::vector<double> mod;
  for (Index k = 1; k < 8; ++k) mod.push_back(dec.spectrum.mu(k));
  std::sort(mod.begin(), mod.end());
  for (std::size_t i = 0; i < adj.size(); ++i) CHECK(std::abs(adj[i] - mod[i]) < 1e-12);
  for (Index k = 2; k < 8; ++k) CHECK(std::abs(dec.spectrum.mu(k - 1)) >= std::abs(dec.spectrum.mu(k)));
}

TEST_CASE("modularity errors") {
  Matrix split = Matrix::Zero(4, 4);
  split(0, 1) = split(1, 0) = 1.0;
  split(2, 3) = split(3, 2) = 1.0;
  CHECK_THROWS_AS(normalized_modularity(WeightedGraph::make(split)), Error);
  Matrix lonely = Matrix::Zero(3, 3);
  lonely(0, 1) = lonely(1, 0) = 1.0;
  try {
    normalized_modularity(WeightedGraph::make(lonely));
    FAIL("expected ZeroDegree");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDegree);
  }
  CHECK_THROWS_AS(normalized_modularity(WeightedGraph::make(complete(3))).spectrum.mu(3), Error);
}

TEST_CASE("interlacing under low-rank perturbation") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Index m = rng.uniform_int(2, 9);
    const Index n = rng.uniform_int(2, 9);
    const Index k = rng.uniform_int(0, std::min(m, n) - 1);
    const Matrix a = gaussian(m, n, rng);
    Matrix b = Matrix::Zero(m, n);
    for (Index r = 0; r < k; ++r) b += gaussian(m, 1, rng) * gaussian(1, n, rng);
    const Vector slack = interlacing_check(a, b, k);
    if (slack.size()) CHECK(slack.maxCoeff() <= 1e-9);
  }
  Rng rng2(1);
  const Matrix a = gaussian(4, 4, rng2);
  try {
    interlacing_check(a, gaussian(4, 4, rng2), 2);
    FAIL("expected RankExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankExceeded);
  }
}
