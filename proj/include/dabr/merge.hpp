#pragma once

// Generic Huffman-like merge loop. An algebra supplies a weight type, a
// tolerant three-way comparison and the combine rule; the loop repeatedly
// merges the two smallest live items and returns the leaf depths.
//
// Two priority structures are provided. The two-queue variant (sorted
// leaves + FIFO of merged items) runs in linear time when the leaf weights
// are already sorted; the binary heap handles arbitrary order.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "dabr/core.hpp"

namespace dabr {

// Deterministic resolution of equal-weight items. bottom_merge picks the
// item with the smaller subtree height first, top_merge the larger; both
// then fall back to the older item (smaller creation index).
enum class TiePolicy { bottom_merge, top_merge };

enum class MergeStrategy { automatic, two_queue, heap };

template <class A>
concept MergeAlgebra = requires(const A& alg, const typename A::weight_type& w) {
  // negative, zero (tie) or positive
  { alg.compare(w, w) } -> std::convertible_to<int>;
  // combine(smaller, larger)
  { alg.combine(w, w) } -> std::same_as<typename A::weight_type>;
};

template <class W>
struct MergeOutcome {
  LengthVector lengths;
  W root;
  std::size_t root_height = 0;
};

struct NoMergeObserver {
  template <class W>
  void operator()(const W&, const W&, const W&) const {}
};

namespace detail {

template <class A>
class MergeState {
 public:
  using W = typename A::weight_type;

  MergeState(const A& alg, std::vector<W> leaves, TiePolicy tie)
      : alg_(alg), tie_(tie), n_(leaves.size()) {
    weight_ = std::move(leaves);
    weight_.reserve(2 * n_ - 1);
    height_.assign(n_, 0);
    height_.reserve(2 * n_ - 1);
    parent_.assign(2 * n_ - 1, 0);
  }

  // Strict "a is taken before b".
  bool before(std::size_t a, std::size_t b) const {
    const int c = alg_.compare(weight_[a], weight_[b]);
    if (c != 0) return c < 0;
    if (height_[a] != height_[b]) {
      return tie_ == TiePolicy::bottom_merge ? height_[a] < height_[b] : height_[a] > height_[b];
    }
    return a < b;
  }

  template <class Observer>
  std::size_t merge(std::size_t smaller, std::size_t larger, Observer& obs) {
    const std::size_t id = weight_.size();
    weight_.push_back(alg_.combine(weight_[smaller], weight_[larger]));
    height_.push_back(std::max(height_[smaller], height_[larger]) + 1);
    parent_[smaller] = id;
    parent_[larger] = id;
    obs(weight_[smaller], weight_[larger], weight_[id]);
    return id;
  }

  MergeOutcome<W> finish() const {
    const std::size_t root = weight_.size() - 1;
    std::vector<int> depth(weight_.size(), 0);
    // parents always have larger ids than their children
    for (std::size_t id = root; id-- > 0;) depth[id] = depth[parent_[id]] + 1;
    MergeOutcome<W> out;
    out.lengths.assign(depth.begin(), depth.begin() + static_cast<std::ptrdiff_t>(n_));
    out.root = weight_[root];
    out.root_height = height_[root];
    return out;
  }

  const A& algebra() const { return alg_; }
  const W& weight(std::size_t id) const { return weight_[id]; }
  std::size_t leaf_count() const { return n_; }

 private:
  const A& alg_;
  TiePolicy tie_;
  std::size_t n_;
  std::vector<W> weight_;
  std::vector<std::size_t> height_;
  std::vector<std::size_t> parent_;
};

// Leaf order for the two-queue loop, or empty if the leaves are not
// monotone. Equal leaves keep ascending index order.
template <class A>
std::vector<std::size_t> monotone_leaf_order(const A& alg, const std::vector<typename A::weight_type>& w) {
  const std::size_t n = w.size();
  bool ascending = true;
  bool descending = true;
  for (std::size_t i = 1; i < n && (ascending || descending); ++i) {
    const int c = alg.compare(w[i - 1], w[i]);
    if (c > 0) ascending = false;
    if (c < 0) descending = false;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (ascending) return order;
  if (!descending) return {};
  std::reverse(order.begin(), order.end());
  std::size_t run = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || alg.compare(w[order[i - 1]], w[order[i]]) != 0) {
      std::reverse(order.begin() + static_cast<std::ptrdiff_t>(run),
                   order.begin() + static_cast<std::ptrdiff_t>(i));
      run = i;
    }
  }
  return order;
}

template <class A, class Observer>
void run_two_queue(MergeState<A>& st, const std::vector<std::size_t>& leaf_order, Observer& obs) {
  const std::size_t n = st.leaf_count();
  std::vector<std::size_t> merged;
  merged.reserve(n);
  std::size_t leaf_pos = 0;
  std::size_t merged_pos = 0;
  auto pop = [&]() {
    const bool have_leaf = leaf_pos < n;
    const bool have_merged = merged_pos < merged.size();
    if (have_leaf && (!have_merged || st.before(leaf_order[leaf_pos], merged[merged_pos]))) {
      return leaf_order[leaf_pos++];
    }
    return merged[merged_pos++];
  };
  for (std::size_t step = 0; step + 1 < n; ++step) {
    const std::size_t a = pop();
    const std::size_t b = pop();
    merged.push_back(st.merge(a, b, obs));
    // merged weights are nondecreasing, so equal weights form the tail;
    // order that tail by the tie policy
    for (std::size_t j = merged.size() - 1;
         j > merged_pos && st.algebra().compare(st.weight(merged[j - 1]), st.weight(merged[j])) == 0 &&
         st.before(merged[j], merged[j - 1]);
         --j) {
      std::swap(merged[j], merged[j - 1]);
    }
  }
}

template <class A, class Observer>
void run_heap(MergeState<A>& st, Observer& obs) {
  const std::size_t n = st.leaf_count();
  std::vector<std::size_t> heap(n);
  std::iota(heap.begin(), heap.end(), std::size_t{0});
  auto later = [&](std::size_t a, std::size_t b) { return st.before(b, a); };
  std::make_heap(heap.begin(), heap.end(), later);
  auto pop = [&]() {
    std::pop_heap(heap.begin(), heap.end(), later);
    const std::size_t id = heap.back();
    heap.pop_back();
    return id;
  };
  for (std::size_t step = 0; step + 1 < n; ++step) {
    const std::size_t a = pop();
    const std::size_t b = pop();
    heap.push_back(st.merge(a, b, obs));
    std::push_heap(heap.begin(), heap.end(), later);
  }
}

}  // namespace detail

template <MergeAlgebra A, class Observer = NoMergeObserver>
MergeOutcome<typename A::weight_type> huffman_merge(const A& alg, std::vector<typename A::weight_type> leaves,
                                                    TiePolicy tie,
                                                    MergeStrategy strategy = MergeStrategy::automatic,
                                                    Observer obs = {}) {
  if (leaves.empty()) throw EmptyInput("nothing to merge");
  std::vector<std::size_t> order;
  if (strategy != MergeStrategy::heap) {
    order = detail::monotone_leaf_order(alg, leaves);
    if (order.empty() && strategy == MergeStrategy::two_queue) {
      // caller asked for the linear path on unsorted input: sort first
      order.resize(leaves.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return alg.compare(leaves[a], leaves[b]) < 0;
      });
    }
  }
  detail::MergeState<A> st(alg, std::move(leaves), tie);
  if (!order.empty()) {
    detail::run_two_queue(st, order, obs);
  } else {
    detail::run_heap(st, obs);
  }
  return st.finish();
}

}  // namespace dabr
