#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qkt/correlators.hpp"
#include "qkt/kring.hpp"
#include "qkt/series.hpp"
#include "qkt/series_matrix.hpp"

namespace qkt {

/// Genus-zero potential G(t, Q) in t_0..t_r and Q_0..Q_{s-1}.
struct Potential {
  KRing ring;
  int degree_rank = 0;
  TruncatedSeries G;

  int t_order() const { return G.truncation().t; }
  int novikov_order() const { return G.truncation().novikov; }
};

/// G = (t,t)/2 + sum_{n,beta} Q^beta/n! <t,...,t>_{0,n,beta}, expanded over
/// the basis. Degree-zero terms with n >= 3 missing from the table come from
/// beta_zero_correlator; any other missing key raises IncompleteTable.
Potential assemble_potential(const CorrelatorTable& table, int t_order, int novikov_order);

/// G_ij = d_i d_j G, known to t-order T-2.
SeriesMatrix quantized_metric(const Potential& p);

/// Rank^3 array of series indexed (i, j, k).
class SeriesTensor3 {
 public:
  SeriesTensor3() = default;
  SeriesTensor3(std::size_t rank, VariableSet vars, Truncation trunc)
      : rank_(rank), data_(rank * rank * rank, TruncatedSeries(vars, trunc)) {}

  std::size_t rank() const { return rank_; }
  TruncatedSeries& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * rank_ + j) * rank_ + k]; }
  const TruncatedSeries& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * rank_ + j) * rank_ + k];
  }

 private:
  std::size_t rank_ = 0;
  std::vector<TruncatedSeries> data_;
};

/// Everything derived from one potential: metric, its inverse, third
/// derivatives, structure constants c_ij^k and multiplication operators A_k
/// with A_k(l, m) = c_km^l.
struct FrobeniusData {
  KRing ring;
  TruncatedSeries potential;
  SeriesMatrix metric;
  SeriesMatrix metric_inv;
  SeriesTensor3 third;
  SeriesTensor3 product;
  std::vector<SeriesMatrix> A;

  const VariableSet& vars() const { return potential.vars(); }
  int t_order() const { return potential.truncation().t; }
  int novikov_order() const { return potential.truncation().novikov; }
};

/// c_ij^k = sum_mu G_ij mu G^{mu k}. Throws SingularMetric when metric_inv is
/// not an inverse of metric up to truncation.
SeriesTensor3 product_tensor(const SeriesMatrix& metric, const SeriesMatrix& metric_inv, const Potential& p,
                             Exec exec = Exec::parallel);

/// Uses the geometric-series inverse of the metric.
FrobeniusData build_frobenius(const Potential& p, Exec exec = Exec::parallel);

/// One nonzero residual coefficient with the index tuple it belongs to.
struct Witness {
  std::vector<std::size_t> indices;
  std::vector<int> exponents;
  Rational value;
};

/// Summary of a family of residual series on a certified window.
struct ResidualSummary {
  Truncation window;
  std::size_t series_checked = 0;
  std::size_t nonzero_coefficients = 0;
  Rational max_abs;
  /// First coefficient (index order, then monomial order) attaining max_abs.
  std::optional<Witness> witness;
  /// Lowest total degree nonzero coefficient, ties broken as above.
  std::optional<Witness> first_nonzero;

  bool is_zero() const { return nonzero_coefficients == 0; }
  nlohmann::json to_json(const VariableSet& vars) const;
};

struct IndexedSeries {
  std::vector<std::size_t> indices;
  TruncatedSeries series;
};

/// Truncates every series to `window` and summarizes. Order of `family`
/// defines witness tie-breaking.
ResidualSummary summarize_residuals(const std::vector<IndexedSeries>& family, const Truncation& window);

/// sum G_ij mu G^{mu nu} G_nu kl - (j <-> k), for all (i, j, k, l) with j != k.
std::vector<IndexedSeries> wdvv_residual_series(const FrobeniusData& fd, Exec exec = Exec::parallel);
ResidualSummary wdvv_residual(const FrobeniusData& fd, Exec exec = Exec::parallel);

/// Curvature of d - z sum_i A_i dt_i is -z R1 + z^2 R2.
struct FlatnessReport {
  std::vector<IndexedSeries> R1;  // d_i A_j - d_j A_i, entries (i, j, row, col), i < j
  std::vector<IndexedSeries> R2;  // [A_i, A_j]
  ResidualSummary r1;
  ResidualSummary r2;
  /// Curvature at z = 1/2 (q = -1), the Levi-Civita connection of the metric.
  ResidualSummary metric_flat;
};

FlatnessReport flatness_residuals(const FrobeniusData& fd, Exec exec = Exec::parallel);

/// d_k G_ij - (c_ki^mu G_mu j + c_kj^mu G_i mu)/2.
ResidualSummary levi_civita_residual(const FrobeniusData& fd, Exec exec = Exec::parallel);
/// A_0 - Id.
ResidualSummary unit_residual(const FrobeniusData& fd);
/// c_ij^k at Q = 0 minus the classical structure constants.
ResidualSummary q0_classical_residual(const FrobeniusData& fd);
/// G * G^-1 - Id.
ResidualSummary inverse_duality_residual(const FrobeniusData& fd, Exec exec = Exec::parallel);
/// Geometric-series inverse minus direct-elimination inverse.
ResidualSummary inverse_equivalence_residual(const FrobeniusData& fd);

struct FrobeniusReport {
  Truncation certified;
  ResidualSummary wdvv;
  FlatnessReport flatness;
  ResidualSummary levi_civita;
  ResidualSummary unit;
  ResidualSummary q0_classical;
  ResidualSummary inverse_duality;
  ResidualSummary inverse_equivalence;

  bool all_zero() const;
  nlohmann::json to_json(const VariableSet& vars) const;
};

FrobeniusReport frobenius_check(const FrobeniusData& fd, Exec exec = Exec::parallel);

}  // namespace qkt
