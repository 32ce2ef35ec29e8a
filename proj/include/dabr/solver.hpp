#pragma once

// Huffman-like constructions for the d-average b-redundancy family:
// exponential Huffman coding, the (b, d) dispatch, the tree-height measure
// loop, and the two-term algebraic minimax algorithm.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dabr/core.hpp"
#include "dabr/merge.hpp"
#include "dabr/penalty.hpp"

namespace dabr {

// Relative tolerance under which two merge weights are treated as tied.
inline constexpr double kWeightTieTolerance = 1e-12;

using Rational = boost::multiprecision::cpp_rational;

// Lexicographically ordered (first-order, second-order) weight of the
// algebraic minimax algorithm.
struct PairWeight {
  double w1 = 0.0;
  double w2 = 0.0;
};

struct ExactPairWeight {
  Rational w1;
  Rational w2;
};

struct Solution {
  LengthVector lengths;
  double penalty = 0.0;
  // log2 of the weight left after the last merge; for exponential Huffman
  // this is log2 sum w_i 2^(beta l_i)
  double final_weight_log2 = std::numeric_limits<double>::quiet_NaN();
  std::optional<RedundancyProfile> profile;
  std::optional<PairWeight> final_pair;
  std::optional<ExactPairWeight> exact_final_pair;

  double final_weight() const { return std::exp2(final_weight_log2); }
};

namespace detail {

inline int tolerant_compare(double a, double b, double rel) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(a - b) <= rel * scale) return 0;
  return a < b ? -1 : 1;
}

}  // namespace detail

// Weights kept as log2 values; combine is log2(2^beta (2^a + 2^b)).
struct ExponentialAlgebra {
  using weight_type = double;
  double beta = 0.0;
  double tolerance = kWeightTieTolerance;

  int compare(double a, double b) const { return detail::tolerant_compare(a, b, tolerance); }
  double combine(double a, double b) const {
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return beta + hi + std::log2(1.0 + std::exp2(lo - hi));
  }
};

// Max-plus combine c + max(a, b) of the tree-height measure problem.
struct TreeHeightAlgebra {
  using weight_type = double;
  double c = 1.0;
  double tolerance = kWeightTieTolerance;

  int compare(double a, double b) const { return detail::tolerant_compare(a, b, tolerance); }
  double combine(double a, double b) const { return c + std::max(a, b); }
};

// Pair weight with the first term stored as log2 w' (one bit added per
// merge) and the second term linear.
struct LogPairWeight {
  double log_w1 = 0.0;
  double w2 = 0.0;
};

struct PairAlgebra {
  using weight_type = LogPairWeight;
  double tolerance = kWeightTieTolerance;

  int compare_first(const LogPairWeight& a, const LogPairWeight& b) const {
    return detail::tolerant_compare(a.log_w1, b.log_w1, tolerance);
  }
  int compare(const LogPairWeight& a, const LogPairWeight& b) const {
    if (int c = compare_first(a, b); c != 0) return c;
    const double scale = std::max(a.w2, b.w2);
    if (std::abs(a.w2 - b.w2) <= tolerance * scale) return 0;
    return a.w2 < b.w2 ? -1 : 1;
  }
  LogPairWeight combine(const LogPairWeight& smaller, const LogPairWeight& larger) const {
    if (compare_first(larger, smaller) > 0) return {larger.log_w1 + 1.0, larger.w2};
    return {larger.log_w1 + 1.0, larger.w2 + smaller.w2};
  }
};

// Exact pair weights as integer numerators over fixed denominators, for
// rational inputs where w' = p^(1/(1+b)) stays rational (b = 0 or +inf).
struct ExactPairAlgebra {
  using Int = boost::multiprecision::cpp_int;
  struct Weight {
    Int w1;
    Int w2;
  };
  using weight_type = Weight;

  int compare(const Weight& a, const Weight& b) const {
    if (a.w1 != b.w1) return a.w1 < b.w1 ? -1 : 1;
    if (a.w2 != b.w2) return a.w2 < b.w2 ? -1 : 1;
    return 0;
  }
  Weight combine(const Weight& smaller, const Weight& larger) const {
    Int w1 = larger.w1 << 1;
    if (larger.w1 > smaller.w1) return {std::move(w1), larger.w2};
    return {std::move(w1), larger.w2 + smaller.w2};
  }
};

namespace detail {

inline double alpha_of(double b) { return std::isinf(b) ? 0.0 : 1.0 / (1.0 + b); }

inline void require_minimax_b(double b) {
  if (std::isnan(b) || b <= -1.0) throw UnsupportedParameter("minimax algorithms need b > -1");
}

inline Solution exponential_from_logs(std::vector<double> log_weights, double beta, TiePolicy tie,
                                      MergeStrategy strategy) {
  ExponentialAlgebra alg{beta};
  auto out = huffman_merge(alg, std::move(log_weights), tie, strategy);
  Solution sol;
  sol.lengths = std::move(out.lengths);
  sol.final_weight_log2 = out.root;
  return sol;
}

// Unary code assigned by decreasing reweighted probability
// p_i^((1+b+d)/(1+b)): most probable symbol first when b + d + 1 > 0,
// least probable first when it is negative (the exponent's sign, which
// stays meaningful at b = -1). Ties by symbol index.
inline LengthVector unary_code(const WeightVector& p, double b, double d) {
  const std::size_t n = p.size();
  if (n == 1) return {0};
  const double sign = std::isinf(b) ? 1.0 : 1.0 + b + d;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return sign > 0 ? p[i] > p[j] : sign < 0 ? p[i] < p[j] : false;
  });
  LengthVector l(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    l[order[rank]] = static_cast<int>(std::min(rank + 1, n - 1));
  }
  return l;
}

}  // namespace detail

// Exponential Huffman coding: merge the two smallest items into
// 2^beta (w_j + w_k). The lengths minimize the beta-exponential average over
// all Kraft-feasible integer vectors; penalty is that exponential average
// and final_weight() is sum w_i 2^(beta l_i).
template <class Observer = NoMergeObserver>
Solution exponential_huffman(const WeightVector& w, double beta, TiePolicy tie = TiePolicy::bottom_merge,
                             MergeStrategy strategy = MergeStrategy::automatic, Observer obs = {}) {
  if (w.size() == 0) throw EmptyInput("no weights");
  if (!std::isfinite(beta)) throw UnsupportedParameter("beta must be finite");
  std::vector<double> logs;
  logs.reserve(w.size());
  for (double x : w.weights()) logs.push_back(std::log2(x));
  ExponentialAlgebra alg{beta};
  auto out = huffman_merge(alg, std::move(logs), tie, strategy, obs);
  Solution sol;
  sol.lengths = std::move(out.lengths);
  sol.final_weight_log2 = out.root;
  sol.penalty = exp_average(w, sol.lengths, beta);
  return sol;
}

// Minimizes max_i (offset_i + c l_i) with the combine rule c + max(w_j, w_k).
inline Solution tree_height_measure(std::span<const double> offsets, double c,
                                    TiePolicy tie = TiePolicy::bottom_merge,
                                    MergeStrategy strategy = MergeStrategy::automatic) {
  if (offsets.empty()) throw EmptyInput("no offsets");
  if (!(c > 0.0) || !std::isfinite(c)) throw UnsupportedParameter("c must be positive");
  for (double w : offsets) {
    if (!(w >= 0.0)) throw NegativeOffset("tree-height offsets must be nonnegative");
  }
  TreeHeightAlgebra alg{c};
  auto out = huffman_merge(alg, std::vector<double>(offsets.begin(), offsets.end()), tie, strategy);
  Solution sol;
  sol.lengths = std::move(out.lengths);
  sol.penalty = out.root;
  sol.final_weight_log2 = std::log2(out.root);
  return sol;
}

// Minimax b-redundancy by merging lexicographic pairs (w', w''), leaves
// (p_i^(1/(1+b)), p_i). The result minimizes the maximal pointwise
// redundancy, then the probability of attaining it; with bottom_merge it
// also has minimum length variance among those codes. Rational inputs with
// b = 0 or b = +inf run on exact integers, so ties are detected exactly.
template <class Observer = NoMergeObserver>
Solution algebraic_minimax(const WeightVector& p, double b, TiePolicy tie = TiePolicy::bottom_merge,
                           MergeStrategy strategy = MergeStrategy::automatic, Observer obs = {}) {
  detail::require_minimax_b(b);
  const std::size_t n = p.size();
  Solution sol;
  if (p.has_exact() && (b == 0.0 || std::isinf(b))) {
    ExactPairAlgebra alg;
    std::vector<ExactPairAlgebra::Weight> leaves;
    leaves.reserve(n);
    for (auto num : p.numerators()) {
      leaves.push_back({b == 0.0 ? ExactPairAlgebra::Int(num) : ExactPairAlgebra::Int(1),
                        ExactPairAlgebra::Int(num)});
    }
    auto out = huffman_merge(alg, std::move(leaves), tie, strategy);
    sol.lengths = std::move(out.lengths);
    const Rational den1 = b == 0.0 ? Rational(p.denominator()) : Rational(1);
    ExactPairWeight exact{Rational(out.root.w1) / den1, Rational(out.root.w2) / Rational(p.denominator())};
    sol.final_pair = PairWeight{static_cast<double>(exact.w1), static_cast<double>(exact.w2)};
    sol.final_weight_log2 = std::log2(sol.final_pair->w1);
    sol.exact_final_pair = std::move(exact);
  } else {
    const double alpha = detail::alpha_of(b);
    std::vector<LogPairWeight> leaves;
    leaves.reserve(n);
    for (double x : p.weights()) leaves.push_back({alpha * std::log2(x), x});
    PairAlgebra alg;
    auto out = huffman_merge(alg, std::move(leaves), tie, strategy, obs);
    sol.lengths = std::move(out.lengths);
    sol.final_pair = PairWeight{std::exp2(out.root.log_w1), out.root.w2};
    sol.final_weight_log2 = out.root.log_w1;
  }
  const WeightVector pn = p.is_normalized() ? p : p.normalized();
  sol.profile = redundancy_profile(pn, sol.lengths, b);
  sol.penalty = sol.profile->max_value;
  return sol;
}

// Minimax b-redundancy through the tree-height measure loop with offsets
// (1/(1+b)) log2(p_i / p_min), c = 1 and top-merge ties.
inline Solution minimax_via_tree_height(const WeightVector& p, double b,
                                        MergeStrategy strategy = MergeStrategy::automatic) {
  detail::require_minimax_b(b);
  const double alpha = detail::alpha_of(b);
  const double pmin = *std::min_element(p.weights().begin(), p.weights().end());
  std::vector<double> offsets;
  offsets.reserve(p.size());
  for (double x : p.weights()) offsets.push_back(alpha == 0.0 ? 0.0 : alpha * std::log2(x / pmin));
  Solution sol = tree_height_measure(offsets, 1.0, TiePolicy::top_merge, strategy);
  const WeightVector pn = p.is_normalized() ? p : p.normalized();
  sol.profile = redundancy_profile(pn, sol.lengths, b);
  sol.penalty = sol.profile->max_value;
  return sol;
}

// Minimal d-average b-redundancy code for any (b, d) in the supported range:
//   d < -1        unary code
//   d = +inf      algebraic minimax
//   d = 0         Huffman coding on p
//   b = +inf      exponential Huffman on p with beta = d
//   otherwise     exponential Huffman on p_i^((1+b+d)/(1+b)) with beta = d
inline Solution solve_dabr(const WeightVector& p, ParamPoint params, TiePolicy tie = TiePolicy::bottom_merge,
                           MergeStrategy strategy = MergeStrategy::automatic) {
  detail::require_normalized(p);
  const double b = params.b;
  const double d = params.d;
  if (std::isnan(b) || std::isnan(d) || b < -1.0) throw UnsupportedParameter("invalid (b, d)");
  if (std::isinf(d) && d < 0) throw UnsupportedParameter("d = -inf is not supported");

  Solution sol;
  if (d < -1.0) {
    sol.lengths = detail::unary_code(p, b, d);
  } else if (b == -1.0 && d != 0.0) {
    throw UnsupportedParameter("b = -1 is only supported with d = 0 or d < -1");
  } else if (std::isinf(d)) {
    sol = algebraic_minimax(p, b, tie, strategy);
  } else {
    const double exponent = (d == 0.0 || std::isinf(b)) ? 1.0 : 1.0 + d / (1.0 + b);
    std::vector<double> logs;
    logs.reserve(p.size());
    for (double x : p.weights()) logs.push_back(exponent * std::log2(x));
    sol = detail::exponential_from_logs(std::move(logs), d, tie, strategy);
  }
  if (b > -1.0) {
    sol.profile = redundancy_profile(p, sol.lengths, b);
    sol.penalty = dabr_value(p, sol.lengths, params);
  } else {
    // b = -1, d = 0: Huffman; report expected length
    sol.penalty = exp_average(p, sol.lengths, 0.0);
  }
  return sol;
}

}  // namespace dabr
