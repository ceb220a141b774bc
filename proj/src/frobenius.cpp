#include "qkt/frobenius.hpp"

#include <algorithm>

#include "qkt/combinatorics.hpp"
#include "qkt/errors.hpp"
#include "qkt/parallel.hpp"

namespace qkt {

using nlohmann::json;

Potential assemble_potential(const CorrelatorTable& table, int t_order, int novikov_order) {
  if (t_order < 0 || novikov_order < 0) throw IncompatibleSeries("truncation orders must be non-negative");
  const KRing& ring = table.ring();
  const std::size_t r = ring.rank();
  const std::size_t s = static_cast<std::size_t>(table.degree_rank());
  const VariableSet vars{static_cast<int>(r), static_cast<int>(s), false};
  const Truncation trunc{t_order, novikov_order, 0};

  std::vector<TruncatedSeries::Term> terms;
  auto push = [&](const std::vector<int>& t_exps, const DegreeVector& beta, Rational coeff) {
    if (coeff == 0) return;
    std::vector<int> exps = t_exps;
    exps.insert(exps.end(), beta.begin(), beta.end());
    terms.push_back({Monomial::from_exponents(exps), std::move(coeff)});
  };

  // (t, t)/2
  const DegreeVector zero_beta(s, 0);
  if (t_order >= 2) {
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < r; ++j) {
        std::vector<int> e(r, 0);
        ++e[i];
        ++e[j];
        push(e, zero_beta, i == j ? Rational(ring.pairing(i, i) / 2) : ring.pairing(i, j));
      }
  }

  // Q^beta/n! <t,...,t> = sum over multisets c of Q^beta t^c <c> / prod c_a!
  for_each_degree(s, novikov_order, [&](const DegreeVector& beta) {
    const bool classical = std::all_of(beta.begin(), beta.end(), [](int b) { return b == 0; });
    for (int n = classical ? 3 : 0; n <= t_order; ++n) {
      for_each_multiset(r, static_cast<std::size_t>(n), [&](const std::vector<int>& ins) {
        CorrelatorKey key{beta, ins};
        std::optional<Rational> value = table.find(key);
        if (!value) {
          if (!classical) throw IncompleteTable(to_string(key));
          value = beta_zero_correlator(ring, ins);
        }
        const std::vector<int> counts = multiset_counts(ins, r);
        BigInt denom = 1;
        for (int c : counts) denom *= factorial(static_cast<unsigned long>(c));
        push(counts, beta, *value / Rational(denom));
      });
    }
  });
  return Potential{ring, table.degree_rank(), TruncatedSeries::from_monomials(vars, trunc, std::move(terms))};
}

SeriesMatrix quantized_metric(const Potential& p) {
  const std::size_t r = p.ring.rank();
  Truncation tr = p.G.truncation();
  tr.t = std::max(tr.t - 2, -1);
  SeriesMatrix m(r, p.G.vars(), tr);
  for (std::size_t i = 0; i < r; ++i) {
    const TruncatedSeries di = p.G.derivative(static_cast<int>(i));
    for (std::size_t j = 0; j < r; ++j) m.set(i, j, di.derivative(static_cast<int>(j)));
  }
  return m;
}

SeriesTensor3 product_tensor(const SeriesMatrix& metric, const SeriesMatrix& metric_inv, const Potential& p,
                             Exec exec) {
  const std::size_t r = metric.dim();
  SeriesMatrix check = multiply(metric, metric_inv, exec) - SeriesMatrix::identity(r, metric.vars(), metric.truncation());
  if (!check.is_zero()) throw SingularMetric("supplied inverse does not invert the metric up to truncation");

  Truncation tr3 = metric.truncation();
  tr3.t = std::max(tr3.t - 1, -1);
  SeriesTensor3 third(r, metric.vars(), tr3);
  for (std::size_t i = 0; i < r; ++i) {
    const TruncatedSeries gi = p.G.derivative(static_cast<int>(i));
    for (std::size_t j = 0; j < r; ++j) {
      const TruncatedSeries gij = gi.derivative(static_cast<int>(j));
      for (std::size_t k = 0; k < r; ++k) third(i, j, k) = gij.derivative(static_cast<int>(k)).truncated(tr3);
    }
  }

  SeriesTensor3 c(r, metric.vars(), Truncation::min(tr3, metric_inv.truncation()));
  for_each_index(static_cast<long>(r * r * r), exec, [&](long idx) {
    const std::size_t i = idx / (r * r), j = (idx / r) % r, k = idx % r;
    TruncatedSeries acc = c(i, j, k);
    for (std::size_t mu = 0; mu < r; ++mu) {
      if (third(i, j, mu).is_zero() || metric_inv(mu, k).is_zero()) continue;
      acc += third(i, j, mu) * metric_inv(mu, k);
    }
    c(i, j, k) = std::move(acc);
  });
  return c;
}

FrobeniusData build_frobenius(const Potential& p, Exec exec) {
  SeriesMatrix metric = quantized_metric(p);
  SeriesMatrix metric_inv = matrix_inverse_geometric(metric, exec);

  const std::size_t r = p.ring.rank();
  Truncation tr3 = metric.truncation();
  tr3.t = std::max(tr3.t - 1, -1);
  SeriesTensor3 third(r, metric.vars(), tr3);
  for_each_index(static_cast<long>(r * r * r), exec, [&](long idx) {
    const std::size_t i = idx / (r * r), j = (idx / r) % r, k = idx % r;
    third(i, j, k) = metric(i, j).derivative(static_cast<int>(k));
  });
  SeriesTensor3 product = product_tensor(metric, metric_inv, p, exec);

  std::vector<SeriesMatrix> A;
  const Truncation trc = product(0, 0, 0).truncation();
  for (std::size_t k = 0; k < r; ++k) {
    SeriesMatrix a(r, metric.vars(), trc);
    for (std::size_t l = 0; l < r; ++l)
      for (std::size_t m = 0; m < r; ++m) a.set(l, m, product(k, m, l));
    A.push_back(std::move(a));
  }
  return FrobeniusData{p.ring,           p.G,    std::move(metric), std::move(metric_inv), std::move(third),
                       std::move(product), std::move(A)};
}

namespace {

json witness_json(const Witness& w, const VariableSet& vars) {
  std::string mono;
  for (std::size_t v = 0; v < w.exponents.size(); ++v) {
    if (w.exponents[v] == 0) continue;
    if (!mono.empty()) mono += "*";
    mono += vars.name(static_cast<int>(v));
    if (w.exponents[v] > 1) mono += "^" + std::to_string(w.exponents[v]);
  }
  return {{"indices", w.indices}, {"exp", w.exponents}, {"monomial", mono.empty() ? "1" : mono},
          {"value", to_string(w.value)}};
}

json window_json(const Truncation& w, const VariableSet& vars) {
  json j = {{"t", w.t}, {"Q", vars.novikov_count > 0 ? w.novikov : 0}};
  if (vars.has_q) j["q"] = w.q;
  return j;
}

}  // namespace

json ResidualSummary::to_json(const VariableSet& vars) const {
  return {{"max_residual", to_string(max_abs)},
          {"window", window_json(window, vars)},
          {"series_checked", series_checked},
          {"nonzero_coefficients", nonzero_coefficients},
          {"witness", witness ? witness_json(*witness, vars) : json(nullptr)},
          {"first_nonzero", first_nonzero ? witness_json(*first_nonzero, vars) : json(nullptr)}};
}

ResidualSummary summarize_residuals(const std::vector<IndexedSeries>& family, const Truncation& window) {
  ResidualSummary out;
  out.window = window;
  out.max_abs = 0;
  for (const auto& f : family) out.window = Truncation::min(out.window, f.series.truncation());
  int best_degree = 0;
  for (const auto& f : family) {
    ++out.series_checked;
    const TruncatedSeries s = f.series.truncated(out.window);
    const int nv = s.vars().size();
    for (const auto& term : s.terms()) {
      ++out.nonzero_coefficients;
      const Rational mag = abs(term.coeff);
      const GroupDegrees d = degrees(term.monomial, s.vars());
      const int total = d.t + d.novikov + d.q;
      if (!out.witness || mag > out.max_abs) {
        out.max_abs = mag;
        out.witness = Witness{f.indices, term.monomial.exponents(nv), term.coeff};
      }
      if (!out.first_nonzero || total < best_degree) {
        best_degree = total;
        out.first_nonzero = Witness{f.indices, term.monomial.exponents(nv), term.coeff};
      }
    }
  }
  return out;
}

std::vector<IndexedSeries> wdvv_residual_series(const FrobeniusData& fd, Exec exec) {
  const std::size_t r = fd.ring.rank();
  std::vector<std::array<std::size_t, 4>> quads;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l)
          if (j != k) quads.push_back({i, j, k, l});

  const Truncation tr = Truncation::min(fd.product(0, 0, 0).truncation(), fd.third(0, 0, 0).truncation());
  std::vector<IndexedSeries> out(quads.size());
  for_each_index(static_cast<long>(quads.size()), exec, [&](long idx) {
    const auto [i, j, k, l] = quads[static_cast<std::size_t>(idx)];
    TruncatedSeries acc(fd.vars(), tr);
    for (std::size_t nu = 0; nu < r; ++nu) {
      if (!fd.product(i, j, nu).is_zero() && !fd.third(nu, k, l).is_zero()) acc += fd.product(i, j, nu) * fd.third(nu, k, l);
      if (!fd.product(i, k, nu).is_zero() && !fd.third(nu, j, l).is_zero()) acc -= fd.product(i, k, nu) * fd.third(nu, j, l);
    }
    out[static_cast<std::size_t>(idx)] = IndexedSeries{{i, j, k, l}, std::move(acc)};
  });
  return out;
}

ResidualSummary wdvv_residual(const FrobeniusData& fd, Exec exec) {
  return summarize_residuals(wdvv_residual_series(fd, exec), fd.product(0, 0, 0).truncation());
}

FlatnessReport flatness_residuals(const FrobeniusData& fd, Exec exec) {
  const std::size_t r = fd.ring.rank();
  std::vector<std::array<std::size_t, 4>> slots;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) slots.push_back({i, j, a, b});

  FlatnessReport rep;
  rep.R1.resize(slots.size());
  rep.R2.resize(slots.size());
  std::vector<IndexedSeries> metric(slots.size());
  for_each_index(static_cast<long>(slots.size()), exec, [&](long idx) {
    const auto [i, j, a, b] = slots[static_cast<std::size_t>(idx)];
    const SeriesMatrix& Ai = fd.A[i];
    const SeriesMatrix& Aj = fd.A[j];
    TruncatedSeries r1 = Aj(a, b).derivative(static_cast<int>(i)) - Ai(a, b).derivative(static_cast<int>(j));
    TruncatedSeries r2(fd.vars(), Ai.truncation());
    for (std::size_t m = 0; m < r; ++m) {
      r2 += Ai(a, m) * Aj(m, b);
      r2 -= Aj(a, m) * Ai(m, b);
    }
    TruncatedSeries curv = r1 * Rational(-1, 2) + r2 * Rational(1, 4);
    const std::vector<std::size_t> key{i, j, a, b};
    rep.R1[static_cast<std::size_t>(idx)] = IndexedSeries{key, std::move(r1)};
    rep.R2[static_cast<std::size_t>(idx)] = IndexedSeries{key, std::move(r2)};
    metric[static_cast<std::size_t>(idx)] = IndexedSeries{key, std::move(curv)};
  });
  Truncation w = fd.A.empty() ? fd.potential.truncation() : fd.A[0].truncation();
  Truncation w1 = w;
  w1.t = std::max(w1.t - 1, -1);
  rep.r1 = summarize_residuals(rep.R1, w1);
  rep.r2 = summarize_residuals(rep.R2, w);
  rep.metric_flat = summarize_residuals(metric, w1);
  return rep;
}

ResidualSummary levi_civita_residual(const FrobeniusData& fd, Exec exec) {
  const std::size_t r = fd.ring.rank();
  std::vector<IndexedSeries> out(r * r * r);
  for_each_index(static_cast<long>(r * r * r), exec, [&](long idx) {
    const std::size_t k = idx / (r * r), i = (idx / r) % r, j = idx % r;
    TruncatedSeries half(fd.vars(), fd.product(0, 0, 0).truncation());
    for (std::size_t mu = 0; mu < r; ++mu) {
      half += fd.product(k, i, mu) * fd.metric(mu, j);
      half += fd.product(k, j, mu) * fd.metric(i, mu);
    }
    TruncatedSeries res = fd.metric(i, j).derivative(static_cast<int>(k)) - half * Rational(1, 2);
    out[static_cast<std::size_t>(idx)] = IndexedSeries{{k, i, j}, std::move(res)};
  });
  return summarize_residuals(out, fd.product(0, 0, 0).truncation());
}

namespace {

std::vector<IndexedSeries> matrix_entries(const SeriesMatrix& m) {
  std::vector<IndexedSeries> out;
  for (std::size_t a = 0; a < m.dim(); ++a)
    for (std::size_t b = 0; b < m.dim(); ++b) out.push_back({{a, b}, m(a, b)});
  return out;
}

}  // namespace

ResidualSummary unit_residual(const FrobeniusData& fd) {
  const SeriesMatrix& a0 = fd.A.at(0);
  return summarize_residuals(matrix_entries(a0 - SeriesMatrix::identity(a0.dim(), a0.vars(), a0.truncation())),
                             a0.truncation());
}

ResidualSummary q0_classical_residual(const FrobeniusData& fd) {
  const std::size_t r = fd.ring.rank();
  std::vector<IndexedSeries> out;
  Truncation w = fd.product(0, 0, 0).truncation();
  w.novikov = 0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        const TruncatedSeries& c = fd.product(i, j, k);
        out.push_back({{i, j, k},
                       c.at_zero(VarGroup::novikov) - TruncatedSeries::constant(c.vars(), c.truncation(), fd.ring.mult(i, j, k))});
      }
  return summarize_residuals(out, w);
}

ResidualSummary inverse_duality_residual(const FrobeniusData& fd, Exec exec) {
  const SeriesMatrix prod = multiply(fd.metric, fd.metric_inv, exec);
  return summarize_residuals(matrix_entries(prod - SeriesMatrix::identity(prod.dim(), prod.vars(), prod.truncation())),
                             prod.truncation());
}

ResidualSummary inverse_equivalence_residual(const FrobeniusData& fd) {
  const SeriesMatrix diff = fd.metric_inv - matrix_inverse_direct(fd.metric);
  return summarize_residuals(matrix_entries(diff), diff.truncation());
}

bool FrobeniusReport::all_zero() const {
  return wdvv.is_zero() && flatness.r1.is_zero() && flatness.r2.is_zero() && flatness.metric_flat.is_zero() &&
         levi_civita.is_zero() && unit.is_zero() && q0_classical.is_zero() && inverse_duality.is_zero() &&
         inverse_equivalence.is_zero();
}

json FrobeniusReport::to_json(const VariableSet& vars) const {
  return {{"certified_orders", {{"t", certified.t}, {"Q", certified.novikov}, {"flatness_t", flatness.r1.window.t}}},
          {"wdvv", wdvv.to_json(vars)},
          {"flatness",
           {{"R1", flatness.r1.to_json(vars)},
            {"R2", flatness.r2.to_json(vars)},
            {"metric_flat", flatness.metric_flat.to_json(vars)},
            {"flat_for_all_q", flatness.r1.is_zero() && flatness.r2.is_zero()}}},
          {"levicivita", levi_civita.to_json(vars)},
          {"unit", unit.to_json(vars)},
          {"q0_classical", q0_classical.to_json(vars)},
          {"inverse", {{"duality", inverse_duality.to_json(vars)}, {"geometric_vs_direct", inverse_equivalence.to_json(vars)}}},
          {"all_zero", all_zero()}};
}

FrobeniusReport frobenius_check(const FrobeniusData& fd, Exec exec) {
  FrobeniusReport rep;
  rep.certified = fd.product(0, 0, 0).truncation();
  rep.wdvv = wdvv_residual(fd, exec);
  rep.flatness = flatness_residuals(fd, exec);
  rep.levi_civita = levi_civita_residual(fd, exec);
  rep.unit = unit_residual(fd);
  rep.q0_classical = q0_classical_residual(fd);
  rep.inverse_duality = inverse_duality_residual(fd, exec);
  rep.inverse_equivalence = inverse_equivalence_residual(fd);
  return rep;
}

}  // namespace qkt
