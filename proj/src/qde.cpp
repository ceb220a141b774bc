#include "qkt/qde.hpp"

#include <algorithm>

#include "qkt/combinatorics.hpp"
#include "qkt/errors.hpp"

namespace qkt {

using nlohmann::json;

QDESolution assemble_fundamental_solution(const CorrelatorTable& table, int t_order, int novikov_order, int q_order) {
  if (t_order < 0 || novikov_order < 0 || q_order < 0) throw IncompatibleSeries("truncation orders must be non-negative");
  const KRing& ring = table.ring();
  const std::size_t r = ring.rank();
  const std::size_t s = static_cast<std::size_t>(table.degree_rank());
  const VariableSet vars{static_cast<int>(r), static_cast<int>(s), true};
  const Truncation trunc{t_order, novikov_order, q_order};

  std::vector<std::vector<TruncatedSeries::Term>> terms(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (ring.pairing(i, j) != 0) terms[i * r + j].push_back({Monomial{}, ring.pairing(i, j)});

  for_each_degree(s, novikov_order, [&](const DegreeVector& beta) {
    const bool classical = std::all_of(beta.begin(), beta.end(), [](int b) { return b == 0; });
    for (int n = classical ? 1 : 0; n <= t_order; ++n) {
      for_each_multiset(r, static_cast<std::size_t>(n), [&](const std::vector<int>& ts) {
        const std::vector<int> counts = multiset_counts(ts, r);
        BigInt denom = 1;
        for (int c : counts) denom *= factorial(static_cast<unsigned long>(c));
        for (std::size_t i = 0; i < r; ++i) {
          std::vector<int> plain = ts;
          plain.push_back(static_cast<int>(i));
          std::sort(plain.begin(), plain.end());
          for (std::size_t j = 0; j < r; ++j) {
            for (int d = 0; d <= q_order; ++d) {
              DescendentKey key{beta, plain, static_cast<int>(j), d};
              std::optional<Rational> value = table.find(key);
              if (!value) {
                if (!classical) throw IncompleteTable(to_string(key));
                value = beta_zero_descendent(ring, plain, static_cast<int>(j), d);
              }
              if (*value == 0) continue;
              std::vector<int> exps = counts;
              exps.insert(exps.end(), beta.begin(), beta.end());
              exps.push_back(d);
              terms[i * r + j].push_back({Monomial::from_exponents(exps), *value / Rational(denom)});
            }
          }
        }
      });
    }
  });

  SeriesMatrix S(r, vars, trunc);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      S.set(i, j, TruncatedSeries::from_monomials(vars, trunc, std::move(terms[i * r + j])));
  return QDESolution{ring, table.degree_rank(), std::move(S)};
}

SeriesMatrix multiplication_operator(const FrobeniusData& fd, std::size_t k, const VariableSet& vars,
                                     const Truncation& trunc) {
  const std::size_t r = fd.ring.rank();
  const Truncation tr = Truncation::min(trunc, fd.product(0, 0, 0).embedded(vars, trunc).truncation());
  SeriesMatrix m(r, vars, tr);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t b = 0; b < r; ++b) m.set(i, b, fd.product(k, i, b).embedded(vars, trunc));
  return m;
}

namespace {

void check_compatible(const QDESolution& sol, const FrobeniusData& fd) {
  if (sol.ring.rank() != fd.ring.rank() || sol.S.vars().novikov_count != fd.vars().novikov_count) {
    throw TruncationMismatch("solution and Frobenius data describe different targets");
  }
  if (std::min(fd.product(0, 0, 0).truncation().t, sol.S.truncation().t - 1) < 0) {
    throw TruncationMismatch("certified t-window is empty");
  }
}

TruncatedSeries geometric_q(const VariableSet& vars, const Truncation& trunc) {
  std::vector<TruncatedSeries::Term> terms;
  for (int m = 0; m <= trunc.q; ++m) {
    Monomial mono;
    mono.set_exponent(vars.size() - 1, m);
    terms.push_back({mono, Rational(1)});
  }
  return TruncatedSeries::from_monomials(vars, trunc, std::move(terms));
}

SeriesMatrix derivative(const SeriesMatrix& m, std::size_t var) {
  Truncation tr = m.truncation();
  tr.t = std::max(tr.t - 1, -1);
  SeriesMatrix out(m.dim(), m.vars(), tr);
  for (std::size_t a = 0; a < m.dim(); ++a)
    for (std::size_t b = 0; b < m.dim(); ++b) out.set(a, b, m(a, b).derivative(static_cast<int>(var)));
  return out;
}

std::vector<IndexedSeries> entries(const SeriesMatrix& m, std::size_t prefix_a, std::size_t prefix_b, bool two) {
  std::vector<IndexedSeries> out;
  for (std::size_t a = 0; a < m.dim(); ++a)
    for (std::size_t b = 0; b < m.dim(); ++b) {
      std::vector<std::size_t> idx = two ? std::vector<std::size_t>{prefix_a, prefix_b, a, b}
                                         : std::vector<std::size_t>{prefix_a, a, b};
      out.push_back({std::move(idx), m(a, b)});
    }
  return out;
}

}  // namespace

std::vector<IndexedSeries> qde_residual_series(const QDESolution& sol, const FrobeniusData& fd, std::size_t k,
                                               Exec exec) {
  check_compatible(sol, fd);
  const VariableSet& vars = sol.S.vars();
  const SeriesMatrix mult = multiplication_operator(fd, k, vars, sol.S.truncation());
  const TruncatedSeries z = geometric_q(vars, sol.S.truncation());
  const SeriesMatrix rhs = scale(multiply(mult, sol.S, exec), z, exec);
  return entries(derivative(sol.S, k) - rhs, k, 0, false);
}

QDEReport qde_residual(const QDESolution& sol, const FrobeniusData& fd, Exec exec) {
  check_compatible(sol, fd);
  const std::size_t r = sol.ring.rank();
  const VariableSet& vars = sol.S.vars();
  Truncation window = sol.S.truncation();
  window.t -= 1;
  window = Truncation::min(window, multiplication_operator(fd, 0, vars, sol.S.truncation()).truncation());

  QDEReport rep;
  rep.window = window;
  for (std::size_t k = 0; k < r; ++k) rep.qde.push_back(summarize_residuals(qde_residual_series(sol, fd, k, exec), window));

  std::vector<SeriesMatrix> dS, mult;
  for (std::size_t k = 0; k < r; ++k) {
    dS.push_back(derivative(sol.S, k));
    mult.push_back(multiplication_operator(fd, k, vars, sol.S.truncation()));
  }
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = j + 1; k < r; ++k) {
      const SeriesMatrix res = multiply(mult[j], dS[k], exec) - multiply(mult[k], dS[j], exec);
      rep.gwdvv.push_back({{j, k}, summarize_residuals(entries(res, j, k, true), window)});
    }
  RationalMatrix inv;
  rep.complete = invert(sol.S.constant_term(), inv);
  return rep;
}

bool QDEReport::all_zero() const {
  return std::all_of(qde.begin(), qde.end(), [](const ResidualSummary& s) { return s.is_zero(); }) &&
         std::all_of(gwdvv.begin(), gwdvv.end(), [](const auto& g) { return g.second.is_zero(); });
}

json QDEReport::to_json(const VariableSet& vars) const {
  json q = json::array();
  for (std::size_t k = 0; k < qde.size(); ++k) {
    json s = qde[k].to_json(vars);
    s["k"] = k;
    q.push_back(std::move(s));
  }
  json g = json::array();
  for (const auto& [jk, summary] : gwdvv) {
    json s = summary.to_json(vars);
    s["j"] = jk.first;
    s["k"] = jk.second;
    g.push_back(std::move(s));
  }
  return {{"certified_window", {{"t", window.t}, {"Q", vars.novikov_count > 0 ? window.novikov : 0}, {"q", window.q}}},
          {"qde_residuals", std::move(q)},
          {"gwdvv_residuals", std::move(g)},
          {"complete", complete},
          {"all_zero", all_zero()}};
}

}  // namespace qkt
