#pragma once

#include <random>
#include <vector>

#include "qkt/series.hpp"
#include "qkt/series_matrix.hpp"

namespace qkt {

/// Seeded generators for the randomized checks. Output depends only on the
/// seed and the standard library's distributions.
Rational small_rational(std::mt19937_64& rng, int span = 5, int max_den = 3);

/// Random exponent vector inside the truncation box.
std::vector<int> random_exponents(std::mt19937_64& rng, const VariableSet& vars, const Truncation& tr);

TruncatedSeries random_series(std::mt19937_64& rng, const VariableSet& vars, const Truncation& tr, int terms,
                              bool with_constant = true);

/// Symmetric matrix g + F with g a random invertible symmetric constant part
/// and F symmetric with zero constant term.
SeriesMatrix random_perturbed_metric(std::mt19937_64& rng, std::size_t dim, const VariableSet& vars,
                                     const Truncation& tr);

}  // namespace qkt
