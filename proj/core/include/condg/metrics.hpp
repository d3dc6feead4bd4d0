#pragma once

// Pareto-front quality metrics (Purity, Gamma and Delta spread) and
// performance-profile construction.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condg/box.hpp"

namespace condg {

/// u dominates v iff u <= v componentwise and u != v.
bool dominates(const Vector& u, const Vector& v);

/// Points not dominated by any other input point. Exact duplicates do not
/// dominate each other and are all kept. Input order is preserved.
std::vector<Vector> nondominated_filter(const std::vector<Vector>& points);

inline constexpr double kPointMatchTol = 1e-8;

/// True if every coordinate differs by at most tol.
bool same_point(const Vector& a, const Vector& b, double tol = kPointMatchTol);

/// Drops points within tol (max-norm) of an earlier point.
std::vector<Vector> deduplicate(const std::vector<Vector>& points, double tol = kPointMatchTol);

struct FrontApproximation {
  std::string solver_tag;
  std::vector<Vector> points;

  /// Deduplicates and filters raw objective vectors into a front.
  static FrontApproximation from_points(std::string tag, const std::vector<Vector>& raw);
};

/// Nondominated filter of the deduplicated union of all fronts.
std::vector<Vector> combined_reference(const std::vector<FrontApproximation>& fronts);

/// Fraction of front points present (within kPointMatchTol) in the reference.
/// 1 when both are empty, 0 when the front is empty but the reference is not.
double purity(const FrontApproximation& front, const std::vector<Vector>& reference);

/// Largest gap between consecutive sorted coordinates, over all objectives.
/// Singletons give 0; empty fronts throw std::invalid_argument.
double spread_gamma(const FrontApproximation& front);

/// Per-objective extreme values used by spread_delta.
struct Extremes {
  Vector lower;
  Vector upper;
};

/// Min/max per objective over a point set.
Extremes extremes_of(const std::vector<Vector>& points);

/// max_j (d_0 + d_N + sum_i |d_i - dbar|) / (d_0 + d_N + (N-1) dbar) with d_0,
/// d_N the gaps from the extremes to the end points and d_i the interior
/// gaps. 0/0 evaluates to 0. Absent for fewer than two points.
std::optional<double> spread_delta(const FrontApproximation& front, const Extremes& extremes);

struct MetricReport {
  double purity = 0.0;
  std::optional<double> gamma;  ///< absent for empty fronts
  std::optional<double> delta;  ///< absent for fewer than two points
  int n_points = 0;
};

/// costs[s][p] is solver s's cost on problem p; nullopt means failed/absent.
/// Costs must be positive (smaller is better).
using CostMatrix = std::vector<std::vector<std::optional<double>>>;

struct PerformanceProfile {
  /// Per solver: sorted (tau, rho) breakpoints, always including tau = 1.
  std::vector<std::vector<std::pair<double, double>>> curves;
  int problems_used = 0;
  int dropped_columns = 0;  ///< problems with no finite cost, excluded
};

/// Ratio-based profile: r_{s,p} = cost_{s,p} / min_s cost_{s,p}, absent -> inf;
/// rho_s(tau) = |{p : r_{s,p} <= tau}| / #problems.
PerformanceProfile performance_profile(const CostMatrix& costs);

/// Larger-is-better purity converted to a cost: 1/purity, with 0 -> absent.
std::optional<double> purity_cost(std::optional<double> purity);

}  // namespace condg
