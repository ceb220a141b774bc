#include "qkt/random.hpp"

#include <algorithm>

namespace qkt {

Rational small_rational(std::mt19937_64& rng, int span, int max_den) {
  std::uniform_int_distribution<int> num(-span, span);
  std::uniform_int_distribution<int> den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

std::vector<int> random_exponents(std::mt19937_64& rng, const VariableSet& vars, const Truncation& tr) {
  std::vector<int> e(static_cast<std::size_t>(vars.size()), 0);
  auto fill = [&](int first, int count, int budget) {
    if (count == 0 || budget <= 0) return;
    std::uniform_int_distribution<int> total(0, budget);
    int left = total(rng);
    std::uniform_int_distribution<int> pick(first, first + count - 1);
    while (left-- > 0) ++e[static_cast<std::size_t>(pick(rng))];
  };
  fill(0, vars.t_count, tr.t);
  fill(vars.t_count, vars.novikov_count, tr.novikov);
  if (vars.has_q) fill(vars.size() - 1, 1, tr.q);
  return e;
}

TruncatedSeries random_series(std::mt19937_64& rng, const VariableSet& vars, const Truncation& tr, int terms, bool with_constant) {
  std::vector<std::pair<std::vector<int>, Rational>> t;
  for (int k = 0; k < terms; ++k) {
    auto e = random_exponents(rng, vars, tr);
    if (!with_constant && std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) continue;
    t.emplace_back(std::move(e), small_rational(rng));
  }
  return TruncatedSeries::from_terms(vars, tr, std::move(t));
}

SeriesMatrix random_perturbed_metric(std::mt19937_64& rng, std::size_t dim, const VariableSet& vars,
                                            const Truncation& tr) {
  RationalMatrix g(dim, dim), inv;
  do {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) g(i, j) = g(j, i) = small_rational(rng, 3, 2);
  } while (!invert(g, inv));
  SeriesMatrix G(dim, vars, tr);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      TruncatedSeries e = TruncatedSeries::constant(vars, tr, g(i, j)) + random_series(rng, vars, tr, 4, false);
      G.set(i, j, e);
      G.set(j, i, e);
    }
  return G;
}

}  // namespace qkt
