#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include "qkt/rational.hpp"

namespace qkt {

/// Point count n >= 3 with the multiset of cotangent-line exponents, stored
/// sorted ascending.
class DescendentIndex {
 public:
  /// Throws InvalidIndex for n < 3 or a negative exponent.
  explicit DescendentIndex(std::vector<int> exponents);

  std::size_t n() const { return exps_.size(); }
  const std::vector<int>& exponents() const { return exps_; }

  friend auto operator<=>(const DescendentIndex&, const DescendentIndex&) = default;
  friend bool operator==(const DescendentIndex&, const DescendentIndex&) = default;

 private:
  std::vector<int> exps_;
};

/// Euler characteristics chi(M_{0,n}, L_1^{d_1} ... L_n^{d_n}) computed by
/// forgetting a point carrying exponent 0 (string step) or 1 (dilaton step):
///
///   d_j = 0:  E(d) = E(d') + sum_{i != j} sum_{k=1}^{d_i} E(d' with d_i -> d_i - k)
///   d_j = 1:  E(d) = (n-2) E(d') + (same double sum)
///
/// where d' drops entry j. The memo is safe for concurrent queries.
class DescendentEngine {
 public:
  /// Canonical reduction at the smallest exponent. Throws NotReducible when
  /// the recursion reaches n >= 4 points all carrying exponents >= 2.
  BigInt euler(const DescendentIndex& idx);

  /// One reduction step at point `j` of the (unsorted) exponent list, the
  /// smaller indices evaluated canonically. Throws InvalidIndex if d_j > 1.
  BigInt euler_via(std::span<const int> exponents, std::size_t j);

  /// Points whose exponent admits a string or dilaton step.
  static std::vector<std::size_t> admissible_points(std::span<const int> exponents);
  static bool is_reducible(const DescendentIndex& idx);

  /// [E(n; 0, ..., 0, d)] for d = 0..dmax.
  std::vector<BigInt> one_descendent_profile(int n, int dmax);

  std::size_t memo_size() const;
  void clear_memo();

 private:
  BigInt compute(const std::vector<int>& sorted);
  BigInt reduce_at(const std::vector<int>& exps, std::size_t j);
  std::optional<BigInt> lookup(const std::vector<int>& key) const;

  mutable std::shared_mutex mutex_;
  std::map<std::vector<int>, BigInt> memo_;
};

/// Process-wide engine shared by the correlator generators.
DescendentEngine& default_descendent_engine();

inline BigInt descendent_euler(const DescendentIndex& idx) { return default_descendent_engine().euler(idx); }

/// chi(P^1, O(d1 + d2 + d3 + d4)), since M_{0,4} is P^1 with every L_i = O(1).
BigInt oracle_n4(const std::array<int, 4>& d);

inline std::vector<BigInt> one_descendent_profile(int n, int dmax) {
  return default_descendent_engine().one_descendent_profile(n, dmax);
}

}  // namespace qkt
