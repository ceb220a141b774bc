#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

#include "qkt/correlators.hpp"
#include "qkt/frobenius.hpp"
#include "qkt/series_matrix.hpp"

namespace qkt {

/// S_ij(t, Q, q) = g_ij + sum_{n,beta} Q^beta/n! <e_i, t, ..., t, e_j/(1 - qL)>_{0,n+2,beta},
/// with 1/(1 - qL) expanded as sum_d q^d tau_d.
struct QDESolution {
  KRing ring;
  int degree_rank = 0;
  SeriesMatrix S;
};

/// Degree-zero descendent entries missing from the table are generated from
/// the point descendents; any other missing key raises IncompleteTable.
QDESolution assemble_fundamental_solution(const CorrelatorTable& table, int t_order, int novikov_order, int q_order);

/// Matrix of (e_k *) acting on the first index of S: entry (i, b) = c_ki^b,
/// re-expressed over the variables of S.
SeriesMatrix multiplication_operator(const FrobeniusData& fd, std::size_t k, const VariableSet& vars,
                                     const Truncation& trunc);

struct QDEReport {
  Truncation window;
  /// d_k S - (sum_{m<=M} q^m) (e_k *) S, one summary per k.
  std::vector<ResidualSummary> qde;
  /// (e_j *) d_k S - (e_k *) d_j S for j < k.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, ResidualSummary>> gwdvv;
  /// S at t = Q = q = 0 is invertible, so the columns form a complete set.
  bool complete = false;

  bool all_zero() const;
  nlohmann::json to_json(const VariableSet& vars) const;
};

/// Residual families of one k (entries (k, i, l)).
std::vector<IndexedSeries> qde_residual_series(const QDESolution& sol, const FrobeniusData& fd, std::size_t k,
                                               Exec exec = Exec::parallel);

/// Throws TruncationMismatch when ranks differ or the certified window is empty.
QDEReport qde_residual(const QDESolution& sol, const FrobeniusData& fd, Exec exec = Exec::parallel);

}  // namespace qkt
