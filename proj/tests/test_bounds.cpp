#include "mwdisc/bounds.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace mwdisc;

namespace {

Matrix complete(Index n) { return Matrix::Ones(n, n) - Matrix::Identity(n, n); }

Matrix densities(int k) {
  Matrix d = Matrix::Constant(k, k, 1.0);
  d.diagonal().setConstant(4.0);
  return d;
}

}  // namespace

TEST_CASE("right-hand sides") {
  CHECK(theorem1_rhs(0.0, 2) == 0.0);
  CHECK(butler_rhs(0.0) == 0.0);
  const double a = 1e-3;
  CHECK(theorem1_rhs(a, 2) == doctest::Approx(9 * a * (4 - 18 * std::log(a))));
  CHECK(butler_rhs(a) == doctest::Approx(150 * a * (1 - 8 * std::log(a))));
  CHECK(theorem1_rhs(1.0, 1) == doctest::Approx(27.0));
  CHECK_THROWS_AS(theorem1_rhs(-0.1, 1), Error);
  CHECK_THROWS_AS(butler_rhs(1.5), Error);
}

TEST_CASE("relevance thresholds") {
  CHECK(relevance_threshold(1) == doctest::Approx(1.866e-3).epsilon(5e-3));
  CHECK(relevance_threshold(2) == doctest::Approx(8.459e-4).epsilon(5e-3));
  CHECK(relevance_threshold(3) == doctest::Approx(5.329e-4).epsilon(5e-3));
  for (int k = 1; k <= 5; ++k) {
    CHECK(std::abs(theorem1_rhs(relevance_threshold(k), k) - 1.0) < 1e-9);
    CHECK(relevance_threshold(k) < monotonicity_limit(k));
  }
  CHECK(butler_rhs(8.868e-5) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("rhs increases below the monotonicity limit") {
  for (int k = 1; k <= 3; ++k) {
    const double lim = monotonicity_limit(k);
    CHECK(lim == doctest::Approx(std::exp((2.0 - 8.0 * k) / (9.0 * k))));
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double v = theorem1_rhs(lim * i / 100.0, k);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("tighter than the earlier bound") {
  for (int i = 0; i < 50; ++i) {
    const double a = std::exp(std::log(1e-6) + (std::log1p(-1e-6) - std::log(1e-6)) * i / 49.0);
    CHECK(theorem1_rhs(a, 1) < butler_rhs(a));
  }
}

TEST_CASE("complete graph bound and mixing check") {
  const auto g = WeightedGraph::make(complete(4));
  const auto rep = verify(g, 1, DiscMode::Exact);
  CHECK(rep.context == BoundContext::Undirected);
  CHECK(rep.s_k == doctest::Approx(1.0 / 3.0));
  CHECK(rep.disc.alpha == doctest::Approx(0.25));
  CHECK(rep.verdict == Verdict::Satisfied);
  REQUIRE(rep.eml.has_value());
  CHECK(rep.eml->holds);
  CHECK(rep.eml->holds_disjoint);
  CHECK(rep.butler_rhs.has_value());
}

TEST_CASE("table bound on an exact block table") {
  const auto planted = block_table(6, 6, 2, {0.5, 0.5}, {0.5, 0.5}, densities(2), 0.0, 2);
  const auto rep = verify(planted.table, 2, DiscMode::Exact);
  CHECK(rep.disc.alpha == 0.0);
  CHECK(rep.theorem_rhs == 0.0);
  CHECK(rep.s_k <= 1e-9);
  CHECK(rep.verdict == Verdict::Satisfied);
  CHECK_FALSE(rep.butler_rhs.has_value());
}

TEST_CASE("heuristic verdicts") {
  const auto planted = block_table(9, 9, 2, {0.5, 0.5}, {0.5, 0.5}, densities(2), 0.05, 4);
  const auto rep = verify(planted.table, 2, DiscMode::Heuristic);
  CHECK(rep.disc.exactness != Exactness::Exact);
  if (rep.disc.exactness == Exactness::UpperBound) {
    REQUIRE(rep.monotonicity_guard.has_value());
    if (!*rep.monotonicity_guard) CHECK(rep.verdict == Verdict::Inconclusive);
  } else {
    CHECK(rep.verdict == Verdict::Inconclusive);
  }
  CHECK(rep.verdict != Verdict::Violated);
}

TEST_CASE("directed graphs are read as tables") {
  Matrix w(3, 3);
  w << 0, 1, 2,
       1, 0, 1,
       3, 1, 0;
  const auto rep = verify(WeightedGraph::make(w, true), 1, DiscMode::Exact);
  CHECK(rep.context == BoundContext::Directed);
  CHECK(rep.verdict == Verdict::Satisfied);
  CHECK_FALSE(rep.eml.has_value());
}

TEST_CASE("mixing check needs a connected graph") {
  Matrix split = Matrix::Zero(4, 4);
  split(0, 1) = split(1, 0) = 1.0;
  split(2, 3) = split(3, 2) = 1.0;
  CHECK_THROWS_AS(expander_mixing_check(WeightedGraph::make(split), DiscMode::Exact), Error);
}
