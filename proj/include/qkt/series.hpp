#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qkt/rational.hpp"

namespace qkt {

/// The three independent formal directions: deformation coordinates t,
/// Novikov variables Q, and the descendent variable q.
enum class VarGroup { t, novikov, q };

inline constexpr int kMaxVariables = 16;
inline constexpr int kMaxOrder = 60;

/// Variable layout t0..t{t_count-1}, Q0..Q{novikov_count-1}, then q if
/// present. Exponent vectors always follow this order.
struct VariableSet {
  int t_count = 0;
  int novikov_count = 0;
  bool has_q = false;

  int size() const { return t_count + novikov_count + (has_q ? 1 : 0); }
  VarGroup group(int var) const;
  std::string name(int var) const;
  /// Throws UnknownVariable.
  int index_of(std::string_view name) const;

  friend bool operator==(const VariableSet&, const VariableSet&) = default;
};

/// Truncation order per group: total t-degree, total Q-degree, q-degree.
/// An order of -1 means no coefficient in that group is known.
struct Truncation {
  int t = 0;
  int novikov = 0;
  int q = 0;

  int of(VarGroup g) const;
  int& of(VarGroup g);
  static Truncation min(const Truncation& a, const Truncation& b);

  friend bool operator==(const Truncation&, const Truncation&) = default;
};

/// Packed exponent vector, one byte per variable. Numeric order of the
/// packed words is lexicographic order with variable 0 most significant.
class Monomial {
 public:
  Monomial() = default;
  static Monomial from_exponents(std::span<const int> exps);

  int exponent(int var) const {
    return static_cast<int>((words_[var / 8] >> shift(var)) & 0xffu);
  }
  void set_exponent(int var, int e);
  std::vector<int> exponents(int count) const;

  Monomial operator+(const Monomial& o) const {
    Monomial m;
    m.words_[0] = words_[0] + o.words_[0];
    m.words_[1] = words_[1] + o.words_[1];
    return m;
  }

  std::size_t hash() const { return words_[0] * 0x9e3779b97f4a7c15ull ^ (words_[1] + 0x632be59bd9b4e019ull); }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  static int shift(int var) { return 8 * (7 - var % 8); }
  std::array<std::uint64_t, 2> words_{};
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

struct GroupDegrees {
  int t = 0;
  int novikov = 0;
  int q = 0;
};

GroupDegrees degrees(const Monomial& m, const VariableSet& vars);

enum class ArithOp { add, sub, mul };

/// Multivariate formal power series with exact rational coefficients,
/// truncated per variable group. Terms are stored sparsely, sorted by
/// monomial, without zero coefficients and never above the truncation.
class TruncatedSeries {
 public:
  struct Term {
    Monomial monomial;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  TruncatedSeries() = default;
  TruncatedSeries(VariableSet vars, Truncation trunc);

  static TruncatedSeries constant(VariableSet vars, Truncation trunc, const Rational& value);
  static TruncatedSeries variable(VariableSet vars, Truncation trunc, std::string_view name);
  /// Sums duplicate exponent vectors and drops anything above truncation.
  static TruncatedSeries from_terms(VariableSet vars, Truncation trunc,
                                    std::vector<std::pair<std::vector<int>, Rational>> terms);
  static TruncatedSeries from_monomials(VariableSet vars, Truncation trunc, std::vector<Term> terms);

  const VariableSet& vars() const { return vars_; }
  const Truncation& truncation() const { return trunc_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;
  Rational coefficient(std::span<const int> exps) const;

  /// Lowers truncation orders to min(current, target) per group.
  TruncatedSeries truncated(const Truncation& target) const;
  /// Formal partial derivative; the truncation of the variable's group drops by one.
  TruncatedSeries derivative(int var) const;
  TruncatedSeries derivative(std::string_view var) const;
  /// Multiplicative inverse up to truncation. Throws NotInvertible.
  TruncatedSeries reciprocal() const;
  /// Re-expresses the series over a superset of variables. Groups absent
  /// from the source take their order from `trunc`.
  TruncatedSeries embedded(const VariableSet& vars, const Truncation& trunc) const;
  /// Sets every variable of group `g` to zero.
  TruncatedSeries at_zero(VarGroup g) const;

  TruncatedSeries operator-() const;
  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  TruncatedSeries& operator*=(const Rational& s);

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& s) { return a *= s; }
  friend TruncatedSeries operator*(const Rational& s, TruncatedSeries a) { return a *= s; }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

  bool within(const GroupDegrees& d) const {
    return d.t <= trunc_.t && d.novikov <= trunc_.novikov && d.q <= trunc_.q;
  }

 private:
  void check_compatible(const TruncatedSeries& o, const char* op) const;
  void add_scaled(const TruncatedSeries& o, int sign);

  VariableSet vars_;
  Truncation trunc_;
  std::vector<Term> terms_;
};

TruncatedSeries series_arith(const TruncatedSeries& a, const TruncatedSeries& b, ArithOp op);

/// Pretty form such as "1 - 2*t0^2*Q0 + 1/6*q", used in messages.
std::string to_string(const TruncatedSeries& s);

}  // namespace qkt
