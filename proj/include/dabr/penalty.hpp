#pragma once

// Scalar functionals over (weights, lengths): exponential averages, Renyi
// entropy, ideal real-valued lengths, pointwise and d-average b-redundancy,
// the integer-vs-ideal bound, and the large-d threshold.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dabr/core.hpp"

namespace dabr {

// Pointwise redundancies closer than this to the maximum count as attaining it.
inline constexpr double kRedundancyTieTolerance = 1e-9;

enum class IdealKind { dagger, ddagger };

struct IdealLengths {
  std::vector<double> values;
  IdealKind kind = IdealKind::dagger;
};

struct RedundancyProfile {
  std::vector<double> pointwise;
  double max_value = 0.0;
  double prob_of_max = 0.0;
};

struct BoundReport {
  double dabr_value = 0.0;
  double lower_anchor = 0.0;
  double gap = 0.0;
  double omega = 0.0;
  double alpha = 0.0;
};

namespace detail {

// log2 of sum_i 2^x_i without overflow.
inline double log2_sum_exp2(std::span<const double> x) {
  double m = -kInf;
  for (double v : x) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp2(v - m);
  return m + std::log2(s);
}

inline void require_normalized(const WeightVector& p) {
  if (!p.is_normalized()) throw NotNormalized("a probability vector is required");
}

inline void require_same_size(const WeightVector& w, std::span<const int> l) {
  if (w.size() != l.size()) throw DimensionMismatch("weights and lengths differ in size");
  check_lengths(l);
}

// log2 sum_i p_i^order, with p rescaled to sum exactly to one.
inline double log2_power_sum(const WeightVector& p, double order) {
  const double total = p.sum();
  if (order == 0.0) return std::log2(static_cast<double>(p.size()));
  if (std::abs(order - 1.0) < 0.5) {
    // sum p^a = 1 + sum p (p^(a-1) - 1); expm1/log1p keep the value
    // accurate when a is near one
    double acc = 0.0;
    for (double w : p.weights()) {
      const double q = w / total;
      acc += q * std::expm1((order - 1.0) * std::log(q));
    }
    return std::log1p(acc) / std::numbers::ln2;
  }
  std::vector<double> terms;
  terms.reserve(p.size());
  for (double w : p.weights()) terms.push_back(order * std::log2(w / total));
  return log2_sum_exp2(terms);
}

// (1/d) log2 sum_i q_i 2^(d x_i) for q summing to one. Near d = 0 the
// log-sum-exp form loses digits to the division, so small |d x| goes
// through expm1/log1p.
inline double exponential_mean(std::span<const double> q, std::span<const double> x, double d) {
  double span = 0.0;
  for (double v : x) span = std::max(span, std::abs(v));
  if (std::abs(d) * span <= 1.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += q[i] * std::expm1(d * x[i] * std::numbers::ln2);
    return std::log1p(acc) / (d * std::numbers::ln2);
  }
  std::vector<double> terms(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) terms[i] = std::log2(q[i]) + d * x[i];
  return log2_sum_exp2(terms) / d;
}

// -e log2 p_i + log2 sum_j p_j^e
inline std::vector<double> ideal_from_exponent(const WeightVector& p, double exponent) {
  const double total = p.sum();
  const double shift = log2_power_sum(p, exponent);
  std::vector<double> out;
  out.reserve(p.size());
  for (double w : p.weights()) out.push_back(-exponent * std::log2(w / total) + shift);
  return out;
}

}  // namespace detail

// (1/beta) log2 sum w_i 2^(beta l_i); the beta -> 0 limit sum w_i l_i at zero.
inline double exp_average(const WeightVector& w, std::span<const int> l, double beta) {
  detail::require_same_size(w, l);
  if (!std::isfinite(beta)) throw UnsupportedParameter("beta must be finite");
  if (beta == 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) s += w[i] * l[i];
    return s;
  }
  const double total = w.sum();
  std::vector<double> q(l.size());
  std::vector<double> x(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    q[i] = w[i] / total;
    x[i] = l[i];
  }
  return std::log2(total) / beta + detail::exponential_mean(q, x, beta);
}

// sum w_i 2^(beta l_i), the quantity exponential Huffman merging produces.
inline double exp_sum(const WeightVector& w, std::span<const int> l, double beta) {
  detail::require_same_size(w, l);
  double s = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) s += w[i] * std::exp2(beta * l[i]);
  return s;
}

// Renyi entropy in bits. alpha = 1 is Shannon entropy, alpha = 0 the
// Hartley entropy log2 n, alpha = +inf the min-entropy.
inline double renyi_entropy(const WeightVector& p, double alpha) {
  detail::require_normalized(p);
  if (std::isnan(alpha) || alpha < 0.0) throw UnsupportedParameter("alpha must be >= 0");
  const double total = p.sum();
  if (alpha == 1.0) {
    double h = 0.0;
    for (double w : p.weights()) {
      const double q = w / total;
      h -= q * std::log2(q);
    }
    return h;
  }
  if (std::isinf(alpha)) {
    const double pmax = *std::max_element(p.weights().begin(), p.weights().end());
    return -std::log2(pmax / total);
  }
  return detail::log2_power_sum(p, alpha) / (1.0 - alpha);
}

// Real-valued lengths minimizing the b-exponential average. b = +inf gives
// the uniform limit log2 n.
inline IdealLengths ideal_lengths(const WeightVector& p, double b) {
  detail::require_normalized(p);
  if (std::isnan(b) || b <= -1.0) {
    throw UnsupportedParameter("ideal lengths need b > -1");
  }
  IdealLengths out;
  out.kind = IdealKind::dagger;
  if (std::isinf(b)) {
    out.values.assign(p.size(), std::log2(static_cast<double>(p.size())));
    return out;
  }
  out.values = detail::ideal_from_exponent(p, 1.0 / (1.0 + b));
  return out;
}

// omega = (1+b+d)/((1+b)(1+d)), symmetric in b and d by construction.
// Returns NaN where the expression is undefined.
inline double dabr_omega(double b, double d) {
  if (std::isnan(b) || std::isnan(d)) return std::numeric_limits<double>::quiet_NaN();
  const bool binf = std::isinf(b) && b > 0;
  const bool dinf = std::isinf(d) && d > 0;
  if (binf && dinf) return 0.0;
  if (binf) return 1.0 / (1.0 + d);
  if (dinf) return 1.0 / (1.0 + b);
  if (std::isinf(b) || std::isinf(d)) return std::numeric_limits<double>::quiet_NaN();
  const double den = (1.0 + b) * (1.0 + d);
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (1.0 + (b + d)) / den;
}

// Real-valued minimizer of the d-average b-redundancy.
inline IdealLengths ideal_lengths_ddagger(const WeightVector& p, double b, double d) {
  detail::require_normalized(p);
  const double omega = dabr_omega(b, d);
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw UnsupportedParameter("omega undefined or nonpositive for this (b, d)");
  }
  return IdealLengths{detail::ideal_from_exponent(p, omega), IdealKind::ddagger};
}

inline RedundancyProfile redundancy_profile(const WeightVector& p, std::span<const int> l, double b,
                                            double tie_tolerance = kRedundancyTieTolerance) {
  detail::require_same_size(p, l);
  const IdealLengths ideal = ideal_lengths(p, b);
  RedundancyProfile prof;
  prof.pointwise.resize(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) prof.pointwise[i] = l[i] - ideal.values[i];
  prof.max_value = *std::max_element(prof.pointwise.begin(), prof.pointwise.end());
  const double total = p.sum();
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (prof.pointwise[i] >= prof.max_value - tie_tolerance) prof.prob_of_max += p[i] / total;
  }
  return prof;
}

// d-average b-redundancy: (1/d) log2 sum p_i 2^(d r_i), with the d = 0
// (mean), d = +inf (max) and d = -inf (min) limits as explicit branches.
inline double dabr_value(const WeightVector& p, std::span<const int> l, ParamPoint params) {
  detail::require_same_size(p, l);
  const double b = params.b;
  const double d = params.d;
  if (std::isnan(d)) throw UnsupportedParameter("d must not be NaN");
  const IdealLengths ideal = ideal_lengths(p, b);
  const double total = p.sum();
  std::vector<double> r(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) r[i] = l[i] - ideal.values[i];
  if (d == 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += p[i] / total * r[i];
    return s;
  }
  if (std::isinf(d)) {
    return d > 0 ? *std::max_element(r.begin(), r.end()) : *std::min_element(r.begin(), r.end());
  }
  std::vector<double> q(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) q[i] = p[i] / total;
  return detail::exponential_mean(q, r, d);
}

// Compares the optimal integer DABR with alpha*b*(H_omega - H_alpha), the
// value attained by the real-valued optimum. Valid for b > -1, d >= -1 and
// b + d >= -1; alpha*b is b/(1+b), taken as 1 at b = +inf.
inline BoundReport bound_report(const WeightVector& p, ParamPoint params, std::span<const int> l_opt) {
  const double b = params.b;
  const double d = params.d;
  if (std::isnan(b) || std::isnan(d) || b <= -1.0 || d < -1.0 || b + d < -1.0) {
    throw UnsupportedParameter("bounds need b > -1, d >= -1, b + d >= -1");
  }
  BoundReport rep;
  rep.alpha = std::isinf(b) ? 0.0 : 1.0 / (1.0 + b);
  const double alpha_b = std::isinf(b) ? 1.0 : b / (1.0 + b);
  if (d == -1.0) {
    rep.omega = b + d == -1.0 ? 0.0 : kInf;
  } else {
    rep.omega = dabr_omega(b, d);
  }
  rep.dabr_value = dabr_value(p, l_opt, params);
  rep.lower_anchor =
      alpha_b == 0.0 ? 0.0 : alpha_b * (renyi_entropy(p, rep.omega) - renyi_entropy(p, rep.alpha));
  rep.gap = rep.dabr_value - rep.lower_anchor;
  return rep;
}

// D such that every d >= D makes the d-th exponential-redundancy optimum
// also minimize maximal b-redundancy: D = log2(2 / p_min) / delta, where
// delta is the smallest positive fractional part of a difference of ideal
// lengths. Returns 1 when all those differences are integers.
inline double threshold_D(const WeightVector& p, double b, double tolerance = 1e-9) {
  const IdealLengths ideal = ideal_lengths(p, b);
  // frac(l_i - l_j) over ordered pairs is a circular gap between the
  // fractional parts of the l_i, so the minimum is an adjacent gap
  std::vector<double> frac;
  frac.reserve(ideal.values.size());
  for (double v : ideal.values) frac.push_back(v - std::floor(v));
  std::sort(frac.begin(), frac.end());
  std::vector<double> distinct;
  for (double f : frac) {
    if (distinct.empty() || f - distinct.back() > tolerance) distinct.push_back(f);
  }
  if (distinct.size() > 1 && distinct.front() + 1.0 - distinct.back() <= tolerance) {
    distinct.pop_back();
  }
  if (distinct.size() <= 1) return 1.0;
  double delta = distinct.front() + 1.0 - distinct.back();
  for (std::size_t i = 1; i < distinct.size(); ++i) {
    delta = std::min(delta, distinct[i] - distinct[i - 1]);
  }
  const double pmin = *std::min_element(p.weights().begin(), p.weights().end()) / p.sum();
  return std::log2(2.0 / pmin) / delta;
}

}  // namespace dabr
