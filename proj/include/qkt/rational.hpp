#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace qkt {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p" or "-p/q". The result is canonicalized; a zero
/// denominator or stray characters raise SchemaError.
Rational parse_rational(std::string_view text);

/// Lowest-terms decimal form, "p/q" with q > 0, or "p" when q == 1.
std::string to_string(const Rational& value);

Rational binomial(long n, long k);
BigInt factorial(unsigned long n);

/// Dense row-major matrix over the rationals. Used for constant-term
/// metrics and structure-constant slices.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_symmetric() const;
  RationalMatrix transpose() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact Gauss-Jordan inverse. Returns false when the matrix is singular.
bool invert(const RationalMatrix& m, RationalMatrix& out);

}  // namespace qkt
