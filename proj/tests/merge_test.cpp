#include <gtest/gtest.h>

#include <random>

#include "dabr/merge.hpp"
#include "dabr/solver.hpp"
#include "test_util.hpp"

using namespace dabr;

namespace {

std::vector<double> small_int_weights(std::mt19937_64& rng, std::size_t n, bool sorted) {
  std::vector<double> w(n);
  for (double& x : w) x = static_cast<double>(1 + rng() % 4);
  if (sorted) std::sort(w.begin(), w.end());
  return w;
}

}  // namespace

TEST(Merge, EmptyInputThrows) {
  EXPECT_THROW(huffman_merge(TreeHeightAlgebra{1.0}, std::vector<double>{}, TiePolicy::bottom_merge), EmptyInput);
}

TEST(Merge, SingleLeafHasDepthZero) {
  const auto out = huffman_merge(TreeHeightAlgebra{1.0}, std::vector<double>{3.0}, TiePolicy::bottom_merge);
  EXPECT_EQ(out.lengths, LengthVector{0});
  EXPECT_DOUBLE_EQ(out.root, 3.0);
}

TEST(Merge, MonotoneLeafOrder) {
  const TreeHeightAlgebra alg{1.0};
  EXPECT_EQ(detail::monotone_leaf_order(alg, {1.0, 2.0, 2.0, 3.0}), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(detail::monotone_leaf_order(alg, {3.0, 2.0, 2.0, 1.0}), (std::vector<std::size_t>{3, 1, 2, 0}));
  EXPECT_TRUE(detail::monotone_leaf_order(alg, {1.0, 3.0, 2.0}).empty());
}

TEST(Merge, ObserverSeesEveryMerge) {
  std::size_t calls = 0;
  auto obs = [&](double a, double b, double m) {
    ++calls;
    EXPECT_LE(a, b);
    EXPECT_DOUBLE_EQ(m, 1.0 + b);
  };
  huffman_merge(TreeHeightAlgebra{1.0}, std::vector<double>{0.0, 1.0, 2.0, 0.5, 0.0}, TiePolicy::bottom_merge,
                MergeStrategy::heap, obs);
  EXPECT_EQ(calls, 4u);
}

TEST(Merge, TieOrderFollowsPolicy) {
  // offsets (0,0,0,0,1): after two merges the merged items of weight 1 tie
  // with the leaf of weight 1
  const std::vector<double> w{0.0, 0.0, 0.0, 0.0, 1.0};
  const TreeHeightAlgebra alg{1.0};
  const auto bottom = huffman_merge(alg, w, TiePolicy::bottom_merge);
  const auto top = huffman_merge(alg, w, TiePolicy::top_merge);
  EXPECT_EQ(bottom.lengths, (LengthVector{3, 3, 2, 2, 2}));
  EXPECT_EQ(top.lengths, (LengthVector{3, 3, 3, 3, 1}));
  EXPECT_DOUBLE_EQ(bottom.root, 3.0);
  EXPECT_DOUBLE_EQ(top.root, 3.0);
}

template <class Alg>
void expect_strategies_agree(const Alg& alg, const std::vector<double>& w) {
  for (auto tie : {TiePolicy::bottom_merge, TiePolicy::top_merge}) {
    const auto a = huffman_merge(alg, w, tie, MergeStrategy::heap);
    const auto b = huffman_merge(alg, w, tie, MergeStrategy::two_queue);
    const auto c = huffman_merge(alg, w, tie, MergeStrategy::automatic);
    ASSERT_EQ(a.lengths, b.lengths);
    ASSERT_EQ(a.lengths, c.lengths);
    ASSERT_TRUE(kraft_tight(a.lengths));
  }
}

TEST(Merge, StrategiesAgreeUnderTies) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 3000; ++t) {
    const std::size_t n = 2 + rng() % 14;
    const bool sorted = t % 2 == 0;
    auto w = small_int_weights(rng, n, sorted);
    expect_strategies_agree(TreeHeightAlgebra{1.0}, w);
    for (double& x : w) x = std::log2(x);
    expect_strategies_agree(ExponentialAlgebra{0.0}, w);
    expect_strategies_agree(ExponentialAlgebra{1.0}, w);
  }
}

TEST(Merge, StrategiesAgreeOnPairs) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 2 + rng() % 10;
    std::vector<LogPairWeight> w;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(1 + rng() % 4) / 8.0;
      w.push_back({std::log2(x), x});
    }
    std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) { return a.w2 > b.w2; });
    for (auto tie : {TiePolicy::bottom_merge, TiePolicy::top_merge}) {
      const auto a = huffman_merge(PairAlgebra{}, w, tie, MergeStrategy::heap);
      const auto b = huffman_merge(PairAlgebra{}, w, tie, MergeStrategy::two_queue);
      ASSERT_EQ(a.lengths, b.lengths);
    }
  }
}
