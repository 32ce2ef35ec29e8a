#pragma once

// Weights, lengths, parameter points and codebooks, plus Kraft-inequality
// utilities shared by every other header.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dabr/error.hpp"

namespace dabr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance on |sum - 1| for a weight vector to count as a pmf.
inline constexpr double kNormTolerance = 1e-9;

// Codeword lengths indexed by symbol.
using LengthVector = std::vector<int>;

// Positive weights over symbols 0..n-1. Optionally carries an exact
// representation numerators[i] / denominator, used by the tie-exact solvers.
class WeightVector {
 public:
  WeightVector() = default;

  explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    validate();
  }

  // Rescales raw weights so they sum to one.
  static WeightVector probabilities(std::vector<double> weights) {
    WeightVector w(std::move(weights));
    return w.normalized();
  }

  // p_i = numerators[i] / denominator. The vector is a pmf iff the
  // numerators sum to the denominator.
  static WeightVector rational(std::vector<std::int64_t> numerators, std::int64_t denominator) {
    if (denominator <= 0) throw InvalidWeights("denominator must be positive");
    std::vector<double> w;
    w.reserve(numerators.size());
    for (auto num : numerators) {
      if (num <= 0) throw InvalidWeights("numerators must be positive");
      w.push_back(static_cast<double>(num) / static_cast<double>(denominator));
    }
    WeightVector out(std::move(w));
    out.numerators_ = std::move(numerators);
    out.denominator_ = denominator;
    std::int64_t total = 0;
    for (auto num : out.numerators_) total += num;
    if (total == denominator) {
      out.normalized_ = true;
    }
    return out;
  }

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  bool is_normalized() const { return normalized_; }

  double sum() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  bool has_exact() const { return denominator_.has_value(); }
  const std::vector<std::int64_t>& numerators() const { return numerators_; }
  std::int64_t denominator() const { return denominator_.value_or(0); }

  WeightVector normalized() const {
    if (has_exact()) {
      std::int64_t total = 0;
      for (auto num : numerators_) total += num;
      return rational(numerators_, total);
    }
    const double s = sum();
    std::vector<double> w(weights_);
    for (double& x : w) x /= s;
    WeightVector out(std::move(w));
    out.normalized_ = true;
    return out;
  }

  // True when weights are nonincreasing, the order the symbol-index
  // conventions assume (most probable symbol first).
  bool is_nonincreasing() const {
    return std::is_sorted(weights_.begin(), weights_.end(), std::greater<>{});
  }

 private:
  void validate() {
    if (weights_.empty()) throw EmptyInput("weight vector must be nonempty");
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw InvalidWeights("weights must be positive and finite");
      }
    }
    normalized_ = std::abs(sum() - 1.0) <= kNormTolerance;
  }

  std::vector<double> weights_;
  bool normalized_ = false;
  std::vector<std::int64_t> numerators_;
  std::optional<std::int64_t> denominator_;
};

// A (b, d) problem instance. Exact values -1, 0 and +/-inf are ordinary
// doubles and compare exactly, so the limit dispatch is by equality.
struct ParamPoint {
  double b = 0.0;
  double d = 0.0;

  static ParamPoint make(double b, double d) {
    if (std::isnan(b) || std::isnan(d)) throw UnsupportedParameter("b and d must not be NaN");
    if (b < -1.0) throw UnsupportedParameter("b must be >= -1");
    return ParamPoint{b, d};
  }

  bool b_infinite() const { return std::isinf(b); }
  bool d_infinite() const { return std::isinf(d); }

  friend bool operator==(const ParamPoint&, const ParamPoint&) = default;
};

struct Codebook {
  std::vector<std::string> codewords;
};

namespace detail {

inline void check_lengths(std::span<const int> l) {
  if (l.empty()) throw EmptyInput("length vector must be nonempty");
  for (int x : l) {
    if (x < 0) throw InvalidLengths("lengths must be nonnegative");
  }
}

// counts[k] = number of symbols with length k.
inline std::vector<std::uint64_t> length_histogram(std::span<const int> l) {
  const int max_len = *std::max_element(l.begin(), l.end());
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_len) + 1, 0);
  for (int x : l) ++counts[static_cast<std::size_t>(x)];
  return counts;
}

}  // namespace detail

// Sum of 2^-l_i. Accumulates from the deepest level up, so dyadic inputs
// are summed exactly.
inline double kraft_sum(std::span<const int> l) {
  detail::check_lengths(l);
  const auto counts = detail::length_histogram(l);
  double s = 0.0;
  for (std::size_t k = counts.size(); k-- > 0;) {
    if (counts[k] != 0) s += std::ldexp(static_cast<double>(counts[k]), -static_cast<int>(k));
  }
  return s;
}

// Exact comparison of the Kraft sum against 1, valid for any depth.
inline std::strong_ordering kraft_compare(std::span<const int> l) {
  detail::check_lengths(l);
  const auto counts = detail::length_histogram(l);
  std::uint64_t units = 0;  // floor of the partial sum, in units of 2^-k
  bool remainder = false;   // partial sum has bits below the current level
  for (std::size_t k = counts.size() - 1; k > 0; --k) {
    units += counts[k];
    remainder = remainder || (units & 1U) != 0;
    units >>= 1U;
  }
  units += counts[0];
  if (units > 1 || (units == 1 && remainder)) return std::strong_ordering::greater;
  if (units == 1 && !remainder) return std::strong_ordering::equal;
  return std::strong_ordering::less;
}

inline bool kraft_tight(std::span<const int> l) {
  return kraft_compare(l) == std::strong_ordering::equal;
}

// Canonical prefix code: symbols in order of (length, index), each taking
// the numerically smallest codeword of its length that keeps the set
// prefix-free. Equal length vectors always give identical codebooks.
inline Codebook assign_canonical_codewords(std::span<const int> l) {
  if (kraft_compare(l) == std::strong_ordering::greater) {
    throw KraftViolation("Kraft sum exceeds 1");
  }
  std::vector<std::size_t> order(l.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return l[a] < l[b]; });

  Codebook book;
  book.codewords.resize(l.size());
  std::string code;
  bool first = true;
  for (std::size_t sym : order) {
    const auto len = static_cast<std::size_t>(l[sym]);
    if (!first) {
      // binary increment
      std::size_t i = code.size();
      while (i > 0 && code[i - 1] == '1') code[--i] = '0';
      if (i == 0) throw KraftViolation("Kraft sum exceeds 1");
      code[i - 1] = '1';
    }
    code.append(len - code.size(), '0');
    book.codewords[sym] = code;
    first = false;
  }
  return book;
}

inline bool is_prefix_free(const Codebook& book) {
  std::vector<std::string> sorted = book.codewords;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].compare(0, sorted[i - 1].size(), sorted[i - 1]) == 0) return false;
  }
  return true;
}

// Variance of the codeword length under p.
inline double length_variance(const WeightVector& p, std::span<const int> l) {
  if (p.size() != l.size()) throw DimensionMismatch("weights and lengths differ in size");
  if (std::all_of(l.begin(), l.end(), [&](int x) { return x == l[0]; })) return 0.0;
  const double total = p.sum();
  double mean = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) mean += p[i] * l[i];
  mean /= total;
  double var = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double dev = l[i] - mean;
    var += p[i] * dev * dev;
  }
  return var / total;
}

}  // namespace dabr
