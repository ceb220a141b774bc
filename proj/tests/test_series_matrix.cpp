#include <doctest.h>

#include <random>

#include "qkt/errors.hpp"
#include "qkt/series_matrix.hpp"
#include "support.hpp"

using namespace qkt;
using qkt::testing::random_perturbed_metric;
using qkt::testing::random_series;

namespace {

const VariableSet kVars{2, 1, false};
const Truncation kTr{4, 2, 0};

SeriesMatrix random_matrix(std::mt19937_64& rng, std::size_t dim) {
  SeriesMatrix m(dim, kVars, kTr);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m.set(i, j, random_series(rng, kVars, kTr, 5));
  return m;
}

}  // namespace

TEST_CASE("geometric inverse of a 1x1 metric") {
  const VariableSet v{1, 0, false};
  const Truncation tr{3, 0, 0};
  SeriesMatrix G(1, v, tr);
  G.set(0, 0, TruncatedSeries::from_terms(v, tr, {{{0}, 1}, {{1}, -1}}));
  const SeriesMatrix inv = matrix_inverse_geometric(G);
  CHECK(inv(0, 0) == TruncatedSeries::from_terms(v, tr, {{{0}, 1}, {{1}, 1}, {{2}, 1}, {{3}, 1}}));
}

TEST_CASE("inverse examples") {
  const VariableSet v{1, 0, false};
  const Truncation tr{4, 0, 0};
  CHECK(matrix_inverse_geometric(SeriesMatrix::identity(3, v, tr)) == SeriesMatrix::identity(3, v, tr));
  CHECK(matrix_inverse_direct(SeriesMatrix::identity(3, v, tr)) == SeriesMatrix::identity(3, v, tr));

  SeriesMatrix E(1, v, tr);
  E.set(0, 0, testing::exp_series(v, tr, "t0", 4));
  CHECK(matrix_inverse_geometric(E)(0, 0) == testing::exp_series(v, tr, "t0", 4, -1));

  SeriesMatrix one_plus_t(1, v, {3, 0, 0});
  one_plus_t.set(0, 0, TruncatedSeries::from_terms(v, {3, 0, 0}, {{{0}, 1}, {{1}, 1}}));
  CHECK(matrix_inverse_direct(one_plus_t)(0, 0) ==
        TruncatedSeries::from_terms(v, {3, 0, 0}, {{{0}, 1}, {{1}, -1}, {{2}, 1}, {{3}, -1}}));

  RationalMatrix g(2, 2);
  g(0, 0) = g(0, 1) = g(1, 0) = 1;
  RationalMatrix expected(2, 2);
  expected(0, 1) = expected(1, 0) = 1;
  expected(1, 1) = -1;
  CHECK(matrix_inverse_geometric(SeriesMatrix::from_constant(g, v, tr)) == SeriesMatrix::from_constant(expected, v, tr));
}

TEST_CASE("inverse of the K(P^1) pairing deformed by t") {
  // G = [[1 + t0, 1], [1, 0]]: inverse is [[0, 1], [1, -1 - t0]] exactly.
  const VariableSet v{2, 0, false};
  const Truncation tr{3, 0, 0};
  SeriesMatrix G(2, v, tr);
  G.set(0, 0, TruncatedSeries::from_terms(v, tr, {{{0, 0}, 1}, {{1, 0}, 1}}));
  G.set(0, 1, TruncatedSeries::constant(v, tr, 1));
  G.set(1, 0, TruncatedSeries::constant(v, tr, 1));
  SeriesMatrix expected(2, v, tr);
  expected.set(0, 1, TruncatedSeries::constant(v, tr, 1));
  expected.set(1, 0, TruncatedSeries::constant(v, tr, 1));
  expected.set(1, 1, TruncatedSeries::from_terms(v, tr, {{{0, 0}, -1}, {{1, 0}, -1}}));
  CHECK(matrix_inverse_geometric(G) == expected);
  CHECK(matrix_inverse_direct(G) == expected);
}

TEST_CASE("singular constant term is rejected") {
  SeriesMatrix G(2, kVars, kTr);
  G.set(0, 0, TruncatedSeries::variable(kVars, kTr, "t0"));
  G.set(1, 1, TruncatedSeries::constant(kVars, kTr, 1));
  CHECK_THROWS_AS(matrix_inverse_geometric(G), SingularMetric);
  CHECK_THROWS_AS(matrix_inverse_direct(G), SingularMetric);
}

TEST_CASE("geometric and direct inverses agree on random symmetric metrics") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(trial % 3);
    const SeriesMatrix G = random_perturbed_metric(rng, dim, kVars, kTr);
    const SeriesMatrix a = matrix_inverse_geometric(G, Exec::serial);
    CHECK(a == matrix_inverse_direct(G));
    CHECK(multiply(G, a) == SeriesMatrix::identity(dim, kVars, kTr));
    CHECK(multiply(a, G) == SeriesMatrix::identity(dim, kVars, kTr));
    CHECK(a == a.transpose());
  }
}

TEST_CASE("parallel kernels reproduce the serial reference") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const SeriesMatrix a = random_matrix(rng, 3);
    const SeriesMatrix b = random_matrix(rng, 3);
    CHECK(multiply(a, b, Exec::serial) == multiply(a, b, Exec::parallel));
    const auto s = random_series(rng, kVars, kTr, 4);
    CHECK(scale(a, s, Exec::serial) == scale(a, s, Exec::parallel));
    const SeriesMatrix G = random_perturbed_metric(rng, 3, kVars, kTr);
    CHECK(matrix_inverse_geometric(G, Exec::serial) == matrix_inverse_geometric(G, Exec::parallel));
  }
}

TEST_CASE("matrix product is associative and transposes correctly") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    const SeriesMatrix a = random_matrix(rng, 2), b = random_matrix(rng, 2), c = random_matrix(rng, 2);
    CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    CHECK(multiply(a, b).transpose() == multiply(b.transpose(), a.transpose()));
  }
}

TEST_CASE("set rejects entries known to fewer orders") {
  SeriesMatrix m(1, kVars, kTr);
  CHECK_THROWS_AS(m.set(0, 0, TruncatedSeries::constant(kVars, {2, 2, 0}, 1)), IncompatibleSeries);
  CHECK_THROWS_AS(m.set(0, 0, TruncatedSeries::constant(VariableSet{1, 0, false}, kTr, 1)), IncompatibleSeries);
}
