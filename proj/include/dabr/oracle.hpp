#pragma once

// Brute-force ground truth for small alphabets. Every complete binary tree
// with n leaves contributes its depth multiset; every distinct assignment
// of such a multiset to the symbols is evaluated directly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dabr/core.hpp"
#include "dabr/penalty.hpp"

namespace dabr {

inline constexpr std::size_t kOracleMaxN = 12;
inline constexpr std::uint64_t kOracleMaxEvaluations = 10'000'000;
inline constexpr double kOracleTolerance = 1e-9;

struct LengthMultisetCatalog {
  std::size_t n = 0;
  std::vector<LengthVector> multisets;  // each sorted nondecreasing
  std::size_t max_n = kOracleMaxN;
};

struct OracleResult {
  double minimum = 0.0;
  std::vector<LengthVector> optimal;
  std::uint64_t evaluations = 0;
};

namespace detail {

// by_size[k] holds the depth multisets for k leaves, k = 1..n.
inline std::set<LengthVector> tree_depth_multisets(std::size_t n) {
  std::vector<std::set<LengthVector>> by_size(n + 1);
  by_size[1].insert(LengthVector{0});
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t left = 1; left <= k / 2; ++left) {
      for (const auto& x : by_size[left]) {
        for (const auto& y : by_size[k - left]) {
          LengthVector merged;
          merged.reserve(k);
          for (int v : x) merged.push_back(v + 1);
          for (int v : y) merged.push_back(v + 1);
          std::sort(merged.begin(), merged.end());
          by_size[k].insert(std::move(merged));
        }
      }
    }
  }
  return std::move(by_size[n]);
}

inline std::uint64_t distinct_permutations(const LengthVector& sorted) {
  // multinomial n! / prod(count!)
  std::uint64_t total = 1;
  std::size_t placed = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    for (std::size_t k = 1; k <= j - i; ++k) {
      ++placed;
      total = total * placed / k;
    }
    i = j;
  }
  return total;
}

// Direct evaluation of the d-average b-redundancy with the ideal lengths
// computed once per instance.
class DabrEvaluator {
 public:
  DabrEvaluator(const WeightVector& p, ParamPoint params) : d_(params.d) {
    if (std::isnan(params.d)) throw UnsupportedParameter("d must not be NaN");
    const IdealLengths ideal = ideal_lengths(p, params.b);
    const double total = p.sum();
    for (std::size_t i = 0; i < p.size(); ++i) {
      q_.push_back(p[i] / total);
      ideal_.push_back(ideal.values[i]);
    }
    terms_.resize(p.size());
  }

  double operator()(const LengthVector& l) const {
    const std::size_t n = l.size();
    if (d_ == 0.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += q_[i] * (l[i] - ideal_[i]);
      return s;
    }
    if (std::isinf(d_)) {
      double best = l[0] - ideal_[0];
      for (std::size_t i = 1; i < n; ++i) {
        const double r = l[i] - ideal_[i];
        best = d_ > 0 ? std::max(best, r) : std::min(best, r);
      }
      return best;
    }
    double m = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      terms_[i] = std::log2(q_[i]) + d_ * (l[i] - ideal_[i]);
      m = std::max(m, terms_[i]);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::exp2(terms_[i] - m);
    return (m + std::log2(s)) / d_;
  }

 private:
  double d_;
  std::vector<double> q_;
  std::vector<double> ideal_;
  mutable std::vector<double> terms_;
};

template <class Visit>
void for_each_assignment(const LengthMultisetCatalog& cat, Visit&& visit) {
  for (const auto& ms : cat.multisets) {
    LengthVector l = ms;
    do {
      visit(l);
    } while (std::next_permutation(l.begin(), l.end()));
  }
}

}  // namespace detail

// Depth multisets of all complete binary trees with n leaves.
inline LengthMultisetCatalog enumerate_multisets(std::size_t n, std::size_t max_n = kOracleMaxN) {
  if (n == 0) throw EmptyInput("n must be positive");
  if (n > max_n) throw TooLarge("n=" + std::to_string(n) + " exceeds oracle cap " + std::to_string(max_n));
  const auto sets = detail::tree_depth_multisets(n);
  return LengthMultisetCatalog{n, std::vector<LengthVector>(sets.begin(), sets.end()), max_n};
}

// Exhaustive minimum of the d-average b-redundancy over Kraft-tight codes,
// plus every assignment within kOracleTolerance of it.
inline OracleResult oracle_minimize(const WeightVector& p, ParamPoint params, std::size_t max_n = kOracleMaxN,
                                    std::uint64_t max_evaluations = kOracleMaxEvaluations) {
  const LengthMultisetCatalog cat = enumerate_multisets(p.size(), max_n);
  std::uint64_t planned = 0;
  for (const auto& ms : cat.multisets) planned += detail::distinct_permutations(ms);
  if (planned > max_evaluations) {
    throw TooLarge("oracle would need " + std::to_string(planned) + " evaluations");
  }
  const detail::DabrEvaluator eval(p, params);
  OracleResult res;
  res.minimum = kInf;
  detail::for_each_assignment(cat, [&](const LengthVector& l) { res.minimum = std::min(res.minimum, eval(l)); });
  const double slack = kOracleTolerance * std::max(1.0, std::abs(res.minimum));
  detail::for_each_assignment(cat, [&](const LengthVector& l) {
    if (eval(l) <= res.minimum + slack) res.optimal.push_back(l);
  });
  res.evaluations = 2 * planned;
  return res;
}

// Minimax-optimal codes, then those with the smallest probability of
// attaining the maximal redundancy.
inline std::vector<LengthVector> oracle_minimax_refined(const WeightVector& p, double b,
                                                        std::size_t max_n = kOracleMaxN) {
  const OracleResult minimax = oracle_minimize(p, ParamPoint{b, kInf}, max_n);
  std::vector<double> prob;
  prob.reserve(minimax.optimal.size());
  for (const auto& l : minimax.optimal) prob.push_back(redundancy_profile(p, l, b).prob_of_max);
  const double best = *std::min_element(prob.begin(), prob.end());
  std::vector<LengthVector> out;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (prob[i] <= best + kOracleTolerance) out.push_back(minimax.optimal[i]);
  }
  return out;
}

}  // namespace dabr
