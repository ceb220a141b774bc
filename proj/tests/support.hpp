#pragma once

// Shared generators and fixtures for the unit and acceptance suites.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <cstdint>
#include <random>
#include <vector>

#include "qkt/combinatorics.hpp"
#include "qkt/correlators.hpp"
#include "qkt/descendents.hpp"
#include "qkt/random.hpp"
#include "qkt/series.hpp"
#include "qkt/series_matrix.hpp"

namespace qkt::testing {

using qkt::random_perturbed_metric;
using qkt::random_series;
using qkt::small_rational;

/// Truncated exponential sum_{k<=order} x^k/k! in variable `name`.
inline TruncatedSeries exp_series(const VariableSet& vars, const Truncation& tr, std::string_view name, int order,
                                  const Rational& scale = 1) {
  const int var = vars.index_of(name);
  std::vector<std::pair<std::vector<int>, Rational>> t;
  Rational c = 1;
  for (int k = 0; k <= order; ++k) {
    std::vector<int> e(static_cast<std::size_t>(vars.size()), 0);
    e[static_cast<std::size_t>(var)] = k;
    t.emplace_back(e, c);
    c *= scale;
    c /= k + 1;
  }
  return TruncatedSeries::from_terms(vars, tr, std::move(t));
}

/// Evaluates E(n; d) from scratch, trying every admissible forgotten point at
/// every level and requiring all branches to agree. Shares no code with
/// DescendentEngine beyond the recursion rule itself.
class BranchingEvaluator {
 public:
  /// Number of (index, point) branches compared so far.
  std::size_t branches() const { return branches_; }

  BigInt operator()(std::vector<int> d) {
    std::sort(d.begin(), d.end());
    if (d.size() == 3) return 1;
    if (auto it = memo_.find(d); it != memo_.end()) return it->second;
    std::optional<BigInt> agreed;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (d[j] > 1) continue;
      std::vector<int> rest = d;
      rest.erase(rest.begin() + static_cast<long>(j));
      BigInt v = d[j] == 0 ? (*this)(rest) : BigInt(static_cast<long>(d.size()) - 2) * (*this)(rest);
      for (std::size_t i = 0; i < rest.size(); ++i)
        for (int k = 1; k <= rest[i]; ++k) {
          std::vector<int> lowered = rest;
          lowered[i] -= k;
          v += (*this)(lowered);
        }
      ++branches_;
      if (agreed && *agreed != v) throw std::logic_error("reduction orders disagree");
      agreed = v;
    }
    if (!agreed) throw std::domain_error("no admissible point");
    memo_.emplace(d, *agreed);
    return *agreed;
  }

 private:
  std::map<std::vector<int>, BigInt> memo_;
  std::size_t branches_ = 0;
};

/// Q-deformation of K(P^n): the algebra Q[a]/(a^{n+1} - Q) with the trace
/// chi(a^k) = Q^{floor(k/(n+1))}. A correlator with basis indices summing to
/// `a` in degree beta is [beta == floor(a/(n+1))]. Its potential satisfies
/// WDVV and its fundamental solution chi_Q(e_i e_j exp(t/(1-q))) the QDE, so
/// the table exercises every Novikov-degree code path with exact answers.
inline CorrelatorTable trace_form_table(int n, int t_order, int novikov_order, int q_order) {
  const Target target = Target::projective(n);
  const std::size_t rank = static_cast<std::size_t>(n) + 1;
  CorrelatorTable table(target, 1);
  auto chi = [&](const std::vector<int>& ins, int beta) -> Rational {
    int a = 0;
    for (int i : ins) a += i;
    return a / (n + 1) == beta ? 1 : 0;
  };
  for (int beta = 1; beta <= novikov_order; ++beta) {
    for (int m = 0; m <= t_order; ++m) {
      for_each_multiset(rank, static_cast<std::size_t>(m),
                        [&](const std::vector<int>& ins) { table.insert(CorrelatorKey{{beta}, ins}, chi(ins, beta)); });
    }
  }
  // Descendent entries <e_i, t^m, tau_d(e_j)>_{0,m+2,beta}, for every beta.
  for (int beta = 0; beta <= novikov_order; ++beta) {
    for (int m = beta == 0 ? 1 : 0; m <= t_order; ++m) {
      for_each_multiset(rank, static_cast<std::size_t>(m + 1), [&](const std::vector<int>& plain) {
        for (std::size_t j = 0; j < rank; ++j) {
          std::vector<int> all = plain;
          all.push_back(static_cast<int>(j));
          const Rational x = chi(all, beta);
          for (int d = 0; d <= q_order; ++d) {
            Rational v = 0;
            if (x != 0) {
              if (m == 0) {
                v = d == 0 ? x : Rational(0);
              } else {
                std::vector<int> e(static_cast<std::size_t>(m + 2), 0);
                e.back() = d;
                v = x * Rational(descendent_euler(DescendentIndex(e)));
              }
            }
            table.insert(DescendentKey{{beta}, plain, static_cast<int>(j), d}, v);
          }
        }
      });
    }
  }
  return table;
}

}  // namespace qkt::testing
