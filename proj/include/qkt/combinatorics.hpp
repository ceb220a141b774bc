#pragma once

#include <cstddef>
#include <vector>

namespace qkt {

/// Calls fn(v) for each non-decreasing vector v of `size` entries in [0, rank).
template <typename Fn>
void for_each_multiset(std::size_t rank, std::size_t size, Fn&& fn) {
  if (rank == 0 && size > 0) return;
  std::vector<int> v(size, 0);
  while (true) {
    fn(static_cast<const std::vector<int>&>(v));
    std::size_t pos = size;
    while (pos > 0 && v[pos - 1] == static_cast<int>(rank) - 1) --pos;
    if (pos == 0) return;
    const int next = v[pos - 1] + 1;
    for (std::size_t i = pos - 1; i < size; ++i) v[i] = next;
  }
}

/// Calls fn(beta) for every beta in N^s with |beta| <= max_total, in
/// lexicographic order.
template <typename Fn>
void for_each_degree(std::size_t s, int max_total, Fn&& fn) {
  std::vector<int> beta(s, 0);
  auto rec = [&](auto&& self, std::size_t pos, int room) -> void {
    if (pos == s) {
      fn(static_cast<const std::vector<int>&>(beta));
      return;
    }
    for (int k = 0; k <= room; ++k) {
      beta[pos] = k;
      self(self, pos + 1, room - k);
    }
    beta[pos] = 0;
  };
  if (max_total >= 0) rec(rec, 0, max_total);
}

/// Exponent vector (counts per basis index) of a sorted multiset.
inline std::vector<int> multiset_counts(const std::vector<int>& sorted, std::size_t rank) {
  std::vector<int> c(rank, 0);
  for (int i : sorted) ++c[static_cast<std::size_t>(i)];
  return c;
}

}  // namespace qkt
