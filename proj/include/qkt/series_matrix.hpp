#pragma once

#include <cstddef>
#include <vector>

#include "qkt/rational.hpp"
#include "qkt/series.hpp"

namespace qkt {

/// Selects between the OpenMP kernels and their serial reference versions.
enum class Exec { serial, parallel };

/// Square matrix of truncated series sharing one variable set and one
/// truncation.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(std::size_t dim, VariableSet vars, Truncation trunc);

  static SeriesMatrix identity(std::size_t dim, VariableSet vars, Truncation trunc);
  static SeriesMatrix from_constant(const RationalMatrix& m, VariableSet vars, Truncation trunc);

  std::size_t dim() const { return dim_; }
  const VariableSet& vars() const { return vars_; }
  const Truncation& truncation() const { return trunc_; }

  const TruncatedSeries& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  /// Stores `s` truncated to the matrix orders. Throws IncompatibleSeries if
  /// `s` has different variables or is known to fewer orders than the matrix.
  void set(std::size_t i, std::size_t j, TruncatedSeries s);

  RationalMatrix constant_term() const;
  SeriesMatrix truncated(const Truncation& target) const;
  SeriesMatrix transpose() const;
  bool is_zero() const;

  SeriesMatrix& operator+=(const SeriesMatrix& o);
  SeriesMatrix& operator-=(const SeriesMatrix& o);
  SeriesMatrix& operator*=(const Rational& s);
  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) { return a += b; }
  friend SeriesMatrix operator-(SeriesMatrix a, const SeriesMatrix& b) { return a -= b; }
  friend SeriesMatrix operator*(SeriesMatrix a, const Rational& s) { return a *= s; }

  friend bool operator==(const SeriesMatrix&, const SeriesMatrix&) = default;

 private:
  void check_same_shape(const SeriesMatrix& o) const;

  std::size_t dim_ = 0;
  VariableSet vars_;
  Truncation trunc_;
  std::vector<TruncatedSeries> entries_;
};

SeriesMatrix multiply(const SeriesMatrix& a, const SeriesMatrix& b, Exec exec = Exec::parallel);
/// Entry-wise product with a scalar series.
SeriesMatrix scale(const SeriesMatrix& a, const TruncatedSeries& s, Exec exec = Exec::parallel);

/// Inverse by expanding G = g + F as g^-1 + sum_{m>=1} (-1)^m (g^-1 F)^m g^-1.
/// Throws SingularMetric when the constant-term matrix g is singular.
SeriesMatrix matrix_inverse_geometric(const SeriesMatrix& G, Exec exec = Exec::parallel);

/// Inverse by Gauss-Jordan elimination over the series ring. Independent of
/// the geometric expansion; used to cross-check it.
SeriesMatrix matrix_inverse_direct(const SeriesMatrix& G);

}  // namespace qkt
