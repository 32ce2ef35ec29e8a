#pragma once

// Maps the extended (b, d) quadrant into regions sharing the same optimal
// length vector, with transitions located by bisection along grid edges.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dabr/core.hpp"
#include "dabr/solver.hpp"

namespace dabr {

struct RegionSample {
  double b = 0.0;
  double d = 0.0;
  int solution_id = -1;
};

// A located transition: the final bisection bracket [lo, hi] along one
// grid edge, with the solutions on either side. (b, d) is its midpoint.
struct BoundaryPoint {
  double b = 0.0;
  double d = 0.0;
  double b_lo = 0.0;
  double d_lo = 0.0;
  double b_hi = 0.0;
  double d_hi = 0.0;
  int id_lo = -1;
  int id_hi = -1;
};

struct SweepWarning {
  double b = 0.0;
  double d = 0.0;
  std::string message;
};

struct RegionMap {
  std::vector<RegionSample> samples;
  std::vector<LengthVector> solutions;  // indexed by solution id
  std::vector<BoundaryPoint> boundary_points;
  std::vector<double> b_grid;
  std::vector<double> d_grid;
  double resolution = 0.0;
  std::vector<SweepWarning> warnings;

  std::optional<int> solution_at(double b, double d) const {
    for (const auto& s : samples) {
      if (s.b == b && s.d == d) return s.solution_id;
    }
    return std::nullopt;
  }
};

inline std::vector<double> default_sweep_grid() {
  return {-1.0 + 1e-3, -0.9, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, kInf};
}

namespace detail {

class SolutionRegistry {
 public:
  int id_of(const LengthVector& l) {
    auto [it, inserted] = ids_.try_emplace(l, static_cast<int>(list_.size()));
    if (inserted) list_.push_back(l);
    return it->second;
  }
  std::vector<LengthVector> take() { return std::move(list_); }

 private:
  std::map<LengthVector, int> ids_;
  std::vector<LengthVector> list_;
};

inline void check_grid(const std::vector<double>& grid, const char* axis) {
  if (grid.empty()) throw UnsupportedParameter(std::string(axis) + " grid is empty");
  for (double v : grid) {
    if (std::isnan(v) || v < -1.0) {
      throw UnsupportedParameter(std::string(axis) + " grid values must lie in [-1, +inf]");
    }
  }
}

// Edge coordinate: the raw value on finite edges, 1/(1+x) on edges ending
// at +inf so the infinite endpoint sits at 0.
struct EdgeCoordinate {
  bool compact = false;
  double to(double x) const { return compact ? (std::isinf(x) ? 0.0 : 1.0 / (1.0 + x)) : x; }
  double from(double t) const { return compact ? (t == 0.0 ? kInf : 1.0 / t - 1.0) : t; }
};

}  // namespace detail

// Solves every grid point with bottom-merge ties (d = +inf through the
// algebraic minimax algorithm, b = +inf through exponential Huffman) and
// bisects each grid edge whose endpoints disagree until the bracket is no
// wider than `resolution`. Columns at b = -1 are skipped with a warning.
inline RegionMap sweep_region_map(const WeightVector& p, std::vector<double> b_grid, std::vector<double> d_grid,
                                  double resolution = 0.01) {
  detail::require_normalized(p);
  detail::check_grid(b_grid, "b");
  detail::check_grid(d_grid, "d");
  if (!(resolution > 0.0)) throw UnsupportedParameter("resolution must be positive");
  std::sort(b_grid.begin(), b_grid.end());
  b_grid.erase(std::unique(b_grid.begin(), b_grid.end()), b_grid.end());
  std::sort(d_grid.begin(), d_grid.end());
  d_grid.erase(std::unique(d_grid.begin(), d_grid.end()), d_grid.end());

  detail::SolutionRegistry registry;
  auto solve_id = [&](double b, double d) {
    return registry.id_of(solve_dabr(p, ParamPoint{b, d}, TiePolicy::bottom_merge).lengths);
  };

  RegionMap map;
  map.b_grid = b_grid;
  map.d_grid = d_grid;
  map.resolution = resolution;

  const std::size_t nb = b_grid.size();
  const std::size_t nd = d_grid.size();
  std::vector<std::optional<int>> ids(nb * nd);
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      const double b = b_grid[i];
      const double d = d_grid[j];
      try {
        ids[i * nd + j] = solve_id(b, d);
        map.samples.push_back({b, d, *ids[i * nd + j]});
      } catch (const UnsupportedParameter& e) {
        map.warnings.push_back({b, d, e.what()});
      }
    }
  }

  // Bisect from (lo, id_lo) toward (hi, id_hi) along one axis.
  auto refine = [&](double fixed, bool along_b, double x_lo, double x_hi, int id_lo, int id_hi) {
    const detail::EdgeCoordinate coord{std::isinf(x_hi)};
    double t_lo = coord.to(x_lo);
    double t_hi = coord.to(x_hi);
    while (std::abs(t_hi - t_lo) > resolution) {
      const double t_mid = 0.5 * (t_lo + t_hi);
      const double x_mid = coord.from(t_mid);
      const int id_mid = along_b ? solve_id(x_mid, fixed) : solve_id(fixed, x_mid);
      if (id_mid == id_lo) {
        t_lo = t_mid;
      } else {
        t_hi = t_mid;
        id_hi = id_mid;
      }
    }
    const double lo = coord.from(t_lo);
    const double hi = coord.from(t_hi);
    const double mid = coord.from(0.5 * (t_lo + t_hi));
    BoundaryPoint bp;
    if (along_b) {
      bp = {mid, fixed, lo, fixed, hi, fixed, id_lo, id_hi};
    } else {
      bp = {fixed, mid, fixed, lo, fixed, hi, id_lo, id_hi};
    }
    map.boundary_points.push_back(bp);
  };

  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      const auto& here = ids[i * nd + j];
      if (!here) continue;
      if (i + 1 < nb) {
        const auto& next = ids[(i + 1) * nd + j];
        if (next && *next != *here) refine(d_grid[j], true, b_grid[i], b_grid[i + 1], *here, *next);
      }
      if (j + 1 < nd) {
        const auto& next = ids[i * nd + j + 1];
        if (next && *next != *here) refine(b_grid[i], false, d_grid[j], d_grid[j + 1], *here, *next);
      }
    }
  }
  map.solutions = registry.take();
  return map;
}

struct AsymmetryWitness {
  double b = 0.0;
  double d = 0.0;
  int id_bd = -1;
  int id_db = -1;
};

// Grid points (b, d), b < d, whose optimal code differs from the one at
// (d, b). The ideal lengths are symmetric under the swap; integer
// solutions need not be.
inline std::vector<AsymmetryWitness> symmetry_report(const RegionMap& map) {
  if (map.b_grid != map.d_grid) throw GridMismatch("symmetry report needs identical b and d grids");
  std::vector<AsymmetryWitness> out;
  for (const auto& s : map.samples) {
    if (!(s.b < s.d)) continue;
    const auto mirrored = map.solution_at(s.d, s.b);
    if (mirrored && *mirrored != s.solution_id) out.push_back({s.b, s.d, s.solution_id, *mirrored});
  }
  return out;
}

}  // namespace dabr
