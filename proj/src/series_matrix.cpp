#include "qkt/series_matrix.hpp"

#include <algorithm>
#include <utility>

#include "qkt/errors.hpp"

namespace qkt {

SeriesMatrix::SeriesMatrix(std::size_t dim, VariableSet vars, Truncation trunc)
    : dim_(dim), vars_(vars), trunc_(trunc), entries_(dim * dim, TruncatedSeries(vars, trunc)) {}

SeriesMatrix SeriesMatrix::identity(std::size_t dim, VariableSet vars, Truncation trunc) {
  return from_constant(RationalMatrix::identity(dim), vars, trunc);
}

SeriesMatrix SeriesMatrix::from_constant(const RationalMatrix& m, VariableSet vars, Truncation trunc) {
  if (m.rows() != m.cols()) throw IncompatibleSeries("non-square constant matrix");
  SeriesMatrix s(m.rows(), vars, trunc);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s.entries_[i * s.dim_ + j] = TruncatedSeries::constant(vars, trunc, m(i, j));
  return s;
}

void SeriesMatrix::set(std::size_t i, std::size_t j, TruncatedSeries s) {
  if (!(s.vars() == vars_)) throw IncompatibleSeries("matrix entry has a different variable set");
  const Truncation& st = s.truncation();
  if (st.t < trunc_.t || st.novikov < trunc_.novikov || st.q < trunc_.q) {
    throw IncompatibleSeries("matrix entry is known to lower order than the matrix");
  }
  entries_[i * dim_ + j] = st == trunc_ ? std::move(s) : s.truncated(trunc_);
}

RationalMatrix SeriesMatrix::constant_term() const {
  RationalMatrix m(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j).constant_term();
  return m;
}

SeriesMatrix SeriesMatrix::truncated(const Truncation& target) const {
  SeriesMatrix s(dim_, vars_, Truncation::min(trunc_, target));
  for (std::size_t k = 0; k < entries_.size(); ++k) s.entries_[k] = entries_[k].truncated(s.trunc_);
  return s;
}

SeriesMatrix SeriesMatrix::transpose() const {
  SeriesMatrix s(dim_, vars_, trunc_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) s.entries_[j * dim_ + i] = (*this)(i, j);
  return s;
}

bool SeriesMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const TruncatedSeries& s) { return s.is_zero(); });
}

void SeriesMatrix::check_same_shape(const SeriesMatrix& o) const {
  if (dim_ != o.dim_ || !(vars_ == o.vars_)) throw IncompatibleSeries("matrix shapes or variable sets differ");
}

SeriesMatrix& SeriesMatrix::operator+=(const SeriesMatrix& o) {
  check_same_shape(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  trunc_ = Truncation::min(trunc_, o.trunc_);
  return *this;
}

SeriesMatrix& SeriesMatrix::operator-=(const SeriesMatrix& o) {
  check_same_shape(o);
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  trunc_ = Truncation::min(trunc_, o.trunc_);
  return *this;
}

SeriesMatrix& SeriesMatrix::operator*=(const Rational& s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

SeriesMatrix multiply(const SeriesMatrix& a, const SeriesMatrix& b, Exec exec) {
  if (a.dim() != b.dim() || !(a.vars() == b.vars())) throw IncompatibleSeries("matrix shapes or variable sets differ");
  const std::size_t n = a.dim();
  SeriesMatrix c(n, a.vars(), Truncation::min(a.truncation(), b.truncation()));
  std::vector<TruncatedSeries> out(n * n);
  auto entry = [&](std::size_t i, std::size_t j) {
    TruncatedSeries acc(c.vars(), c.truncation());
    for (std::size_t k = 0; k < n; ++k) {
      if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
      acc += a(i, k) * b(k, j);
    }
    return acc;
  };
  const long total = static_cast<long>(n * n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < total; ++idx) out[idx] = entry(idx / n, idx % n);
  } else {
    for (long idx = 0; idx < total; ++idx) out[idx] = entry(idx / n, idx % n);
  }
  for (std::size_t idx = 0; idx < n * n; ++idx) c.set(idx / n, idx % n, std::move(out[idx]));
  return c;
}

SeriesMatrix scale(const SeriesMatrix& a, const TruncatedSeries& s, Exec exec) {
  if (!(a.vars() == s.vars())) throw IncompatibleSeries("scalar series has a different variable set");
  const std::size_t n = a.dim();
  SeriesMatrix c(n, a.vars(), Truncation::min(a.truncation(), s.truncation()));
  std::vector<TruncatedSeries> out(n * n);
  const long total = static_cast<long>(n * n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < total; ++idx) out[idx] = a(idx / n, idx % n) * s;
  } else {
    for (long idx = 0; idx < total; ++idx) out[idx] = a(idx / n, idx % n) * s;
  }
  for (std::size_t idx = 0; idx < n * n; ++idx) c.set(idx / n, idx % n, std::move(out[idx]));
  return c;
}

SeriesMatrix matrix_inverse_geometric(const SeriesMatrix& G, Exec exec) {
  const RationalMatrix g = G.constant_term();
  RationalMatrix g_inv;
  if (!invert(g, g_inv)) throw SingularMetric("constant-term matrix is singular");

  const SeriesMatrix g_inv_s = SeriesMatrix::from_constant(g_inv, G.vars(), G.truncation());
  const SeriesMatrix F = G - SeriesMatrix::from_constant(g, G.vars(), G.truncation());
  const SeriesMatrix X = multiply(g_inv_s, F, exec);

  // (g^-1 F)^m raises the total degree by at least m.
  const Truncation& tr = G.truncation();
  const int steps = std::max(tr.t, 0) + std::max(tr.novikov, 0) + std::max(tr.q, 0);
  SeriesMatrix term = g_inv_s;
  SeriesMatrix acc = g_inv_s;
  for (int m = 1; m <= steps; ++m) {
    term = multiply(X, term, exec) * Rational(-1);
    if (term.is_zero()) break;
    acc += term;
  }
  return acc;
}

SeriesMatrix matrix_inverse_direct(const SeriesMatrix& G) {
  const std::size_t n = G.dim();
  RationalMatrix unused;
  if (!invert(G.constant_term(), unused)) throw SingularMetric("constant-term matrix is singular");

  std::vector<std::vector<TruncatedSeries>> a(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i].push_back(G(i, j));
      inv[i].push_back(TruncatedSeries::constant(G.vars(), G.truncation(), i == j ? 1 : 0));
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].constant_term() == 0) ++pivot;
    if (pivot == n) throw SingularMetric("no unit pivot in column " + std::to_string(col));
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const TruncatedSeries p = a[col][col].reciprocal();
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = a[col][j] * p;
      inv[col][j] = inv[col][j] * p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const TruncatedSeries f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  SeriesMatrix out(n, G.vars(), G.truncation());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.set(i, j, inv[i][j]);
  return out;
}

}  // namespace qkt
