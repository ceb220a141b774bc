#include "qkt/descendents.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <string>

#include "qkt/errors.hpp"

namespace qkt {

namespace {

std::string render(std::span<const int> exps) {
  std::string s = "(";
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(exps[i]);
  }
  return s + ")";
}

void validate(std::span<const int> exps) {
  if (exps.size() < 3) throw InvalidIndex("need at least 3 points, got " + std::to_string(exps.size()));
  for (int d : exps) {
    if (d < 0) throw InvalidIndex("negative exponent in " + render(exps));
  }
}

}  // namespace

DescendentIndex::DescendentIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  validate(exps_);
  std::sort(exps_.begin(), exps_.end());
}

std::optional<BigInt> DescendentEngine::lookup(const std::vector<int>& key) const {
  std::shared_lock lock(mutex_);
  auto it = memo_.find(key);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

BigInt DescendentEngine::euler(const DescendentIndex& idx) {
  try {
    return compute(idx.exponents());
  } catch (const NotReducible&) {
    throw NotReducible("no string or dilaton reduction for " + render(idx.exponents()));
  }
}

BigInt DescendentEngine::compute(const std::vector<int>& sorted) {
  if (sorted.size() == 3) return 1;
  if (auto hit = lookup(sorted)) return *hit;
  if (sorted.front() > 1) throw NotReducible(render(sorted));
  BigInt value = reduce_at(sorted, 0);
  std::unique_lock lock(mutex_);
  return memo_.try_emplace(sorted, std::move(value)).first->second;
}

BigInt DescendentEngine::reduce_at(const std::vector<int>& exps, std::size_t j) {
  const std::size_t n = exps.size();
  std::vector<int> rest;
  rest.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (i != j) rest.push_back(exps[i]);

  auto eval = [&](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return compute(v);
  };
  BigInt value = eval(rest);
  if (exps[j] == 1) value *= static_cast<long>(n - 2);
  for (std::size_t i = 0; i < rest.size(); ++i) {
    for (int k = 1; k <= rest[i]; ++k) {
      std::vector<int> lowered = rest;
      lowered[i] -= k;
      value += eval(std::move(lowered));
    }
  }
  return value;
}

BigInt DescendentEngine::euler_via(std::span<const int> exponents, std::size_t j) {
  validate(exponents);
  if (j >= exponents.size() || exponents[j] > 1) {
    throw InvalidIndex("point " + std::to_string(j) + " admits no reduction in " + render(exponents));
  }
  if (exponents.size() == 3) return 1;
  return reduce_at(std::vector<int>(exponents.begin(), exponents.end()), j);
}

std::vector<std::size_t> DescendentEngine::admissible_points(std::span<const int> exponents) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] <= 1) out.push_back(i);
  return out;
}

bool DescendentEngine::is_reducible(const DescendentIndex& idx) {
  // Every reduction keeps the entries >= 2 of the leading term, so the
  // recursion reaches M_{0,3} iff at most three entries are >= 2.
  const auto big = std::count_if(idx.exponents().begin(), idx.exponents().end(), [](int d) { return d >= 2; });
  return idx.n() == 3 || big <= 3;
}

std::vector<BigInt> DescendentEngine::one_descendent_profile(int n, int dmax) {
  if (n < 3) throw InvalidIndex("need at least 3 points, got " + std::to_string(n));
  std::vector<BigInt> out;
  for (int d = 0; d <= dmax; ++d) {
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e.back() = d;
    out.push_back(euler(DescendentIndex(std::move(e))));
  }
  return out;
}

std::size_t DescendentEngine::memo_size() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

void DescendentEngine::clear_memo() {
  std::unique_lock lock(mutex_);
  memo_.clear();
}

DescendentEngine& default_descendent_engine() {
  static DescendentEngine engine;
  return engine;
}

BigInt oracle_n4(const std::array<int, 4>& d) { return BigInt(std::accumulate(d.begin(), d.end(), 0) + 1); }

}  // namespace qkt
