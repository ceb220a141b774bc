#include <doctest.h>

#include <thread>

#include "qkt/combinatorics.hpp"
#include "qkt/descendents.hpp"
#include "qkt/errors.hpp"
#include "support.hpp"

using namespace qkt;

namespace {

BigInt E(std::vector<int> d) { return descendent_euler(DescendentIndex(std::move(d))); }

// All exponent vectors of length n with entries <= dmax, as sorted multisets.
template <class Fn>
void for_each_sorted_index(std::size_t n, int dmax, Fn fn) {
  for_each_multiset(static_cast<std::size_t>(dmax) + 1, n, fn);
}

}  // namespace

TEST_CASE("descendent_euler examples") {
  CHECK(E({2, 5, 9}) == 1);
  CHECK(E({2, 3, 0, 1}) == 7);
  CHECK(E({0, 0, 0, 0, 2}) == 6);
  CHECK(E({1, 1, 0, 0, 0}) == 7);
  CHECK(E({0, 0, 0}) == 1);
}

TEST_CASE("descendent index validation") {
  CHECK_THROWS_AS(DescendentIndex({0, 0}), InvalidIndex);
  CHECK_THROWS_AS(DescendentIndex({0, -1, 0}), InvalidIndex);
  CHECK_THROWS_AS(E({2, 2, 2, 2}), NotReducible);
  CHECK_THROWS_AS(E({0, 2, 2, 2, 2}), NotReducible);
  CHECK_NOTHROW(E({0, 1, 2, 2, 2}));
  CHECK(DescendentIndex({3, 0, 1}).exponents() == std::vector<int>{0, 1, 3});
}

TEST_CASE("oracle_n4") {
  CHECK(oracle_n4({0, 0, 0, 0}) == 1);
  CHECK(oracle_n4({1, 0, 0, 0}) == 2);
  CHECK(oracle_n4({3, 3, 0, 1}) == 8);
}

TEST_CASE("four-point values match the P^1 oracle") {
  int cases = 0;
  for_each_sorted_index(4, 12, [&](const std::vector<int>& d) {
    if (d[0] > 1 || d[0] + d[1] + d[2] + d[3] > 12) return;
    CHECK(E(d) == oracle_n4({d[0], d[1], d[2], d[3]}));
    ++cases;
  });
  CHECK(cases > 100);
}

TEST_CASE("one-descendent profile") {
  for (BigInt v : one_descendent_profile(3, 6)) CHECK(v == 1);
  const auto p4 = one_descendent_profile(4, 6);
  for (int d = 0; d <= 6; ++d) CHECK(p4[static_cast<std::size_t>(d)] == d + 1);
  CHECK(one_descendent_profile(5, 2)[2] == 6);
  for (int n = 3; n <= 8; ++n) {
    const auto p = one_descendent_profile(n, 8);
    for (int d = 0; d <= 8; ++d) CHECK(p[static_cast<std::size_t>(d)] == BigInt(binomial(n + d - 3, d)));
  }
}

TEST_CASE("fundamental-class shadow") {
  for (std::size_t n = 3; n <= 10; ++n) CHECK(E(std::vector<int>(n, 0)) == 1);
}

TEST_CASE("reducibility criterion") {
  CHECK(DescendentEngine::is_reducible(DescendentIndex({2, 2, 2})));
  CHECK(DescendentEngine::is_reducible(DescendentIndex({0, 0, 2, 3, 4})));
  CHECK_FALSE(DescendentEngine::is_reducible(DescendentIndex({0, 2, 2, 2, 2})));
  for_each_sorted_index(6, 3, [&](const std::vector<int>& d) {
    DescendentEngine engine;
    const DescendentIndex idx(d);
    bool threw = false;
    try {
      engine.euler(idx);
    } catch (const NotReducible&) {
      threw = true;
    }
    CHECK(threw != DescendentEngine::is_reducible(idx));
  });
}

TEST_CASE("confluence: every admissible reduction order agrees") {
  testing::BranchingEvaluator branch;
  DescendentEngine engine;
  int indices = 0;
  for (std::size_t n = 4; n <= 7; ++n) {
    for_each_sorted_index(n, 4, [&](const std::vector<int>& d) {
      const DescendentIndex idx(d);
      if (!DescendentEngine::is_reducible(idx)) return;
      const BigInt v = engine.euler(idx);
      CHECK(branch(d) == v);
      for (std::size_t j : DescendentEngine::admissible_points(d)) CHECK(engine.euler_via(d, j) == v);
      ++indices;
    });
  }
  CHECK(indices >= 200);
  CHECK(branch.branches() > static_cast<std::size_t>(indices));
}

TEST_CASE("symmetric-group invariance") {
  const std::vector<int> d{0, 3, 1, 0, 2};
  std::vector<int> p = d;
  std::sort(p.begin(), p.end());
  const BigInt v = E(d);
  do {
    CHECK(E(p) == v);
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("euler_via rejects points that admit no step") {
  DescendentEngine engine;
  const std::vector<int> d{0, 2, 3, 1};
  CHECK_THROWS_AS(engine.euler_via(d, 1), InvalidIndex);
  CHECK(DescendentEngine::admissible_points(d) == std::vector<std::size_t>{0, 3});
}

TEST_CASE("memo: cached and fresh values agree, concurrent queries are safe") {
  DescendentEngine shared;
  std::vector<std::vector<int>> work;
  for_each_sorted_index(6, 3, [&](const std::vector<int>& d) {
    if (DescendentEngine::is_reducible(DescendentIndex(d))) work.push_back(d);
  });
  std::vector<std::vector<BigInt>> results(4, std::vector<BigInt>(work.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (std::size_t k = 0; k < work.size(); ++k) {
        const std::size_t i = (k + t * work.size() / 4) % work.size();
        results[t][i] = shared.euler(DescendentIndex(work[i]));
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(shared.memo_size() > 0);
  for (std::size_t i = 0; i < work.size(); ++i) {
    DescendentEngine fresh;
    const BigInt v = fresh.euler(DescendentIndex(work[i]));
    for (std::size_t t = 0; t < 4; ++t) CHECK(results[t][i] == v);
    CHECK(shared.euler(DescendentIndex(work[i])) == v);
  }
  shared.clear_memo();
  CHECK(shared.memo_size() == 0);
}
