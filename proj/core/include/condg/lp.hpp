#pragma once

// Dense linear programming.
//
//   minimize    c . x
//   subject to  A_eq x  = b_eq
//               A_ub x <= b_ub
//               lower <= x <= upper     (entries may be -inf / +inf)
//
// solve_lp is a two-phase tableau simplex (Dantzig pricing, falling back to
// Bland's rule after a run of degenerate pivots). brute_force_lp enumerates
// vertices and exists to cross-check solve_lp on small instances.

#include <limits>
#include <string_view>

#include "condg/box.hpp"

namespace condg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearProgram {
  Vector objective;
  Matrix a_eq;
  Vector b_eq;
  Matrix a_ub;
  Vector b_ub;
  Vector lower;
  Vector upper;

  /// n free variables, zero objective, no constraints.
  static LinearProgram with_variables(int n);

  int num_vars() const noexcept { return static_cast<int>(objective.size()); }
  int num_eq() const noexcept { return static_cast<int>(a_eq.rows()); }
  int num_ub() const noexcept { return static_cast<int>(a_ub.rows()); }

  /// Throws std::invalid_argument on inconsistent dimensions or NaNs.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

std::string_view to_string(LpStatus s) noexcept;

struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  Vector x;
  double objective_value = 0.0;
  int pivots = 0;

  bool optimal() const noexcept { return status == LpStatus::optimal; }
};

inline constexpr double kDefaultFeasTol = 1e-9;
inline constexpr double kDefaultOptTol = 1e-9;

struct LpOptions {
  double feas_tol = kDefaultFeasTol;
  double opt_tol = kDefaultOptTol;
  /// Degenerate pivots tolerated under Dantzig pricing before switching to Bland.
  int bland_after = 1000;
  /// Pivot cap is cap_factor * (standard-form rows + columns).
  int cap_factor = 50;
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options);
LpSolution solve_lp(const LinearProgram& lp, double feas_tol = kDefaultFeasTol);

/// Size caps for brute_force_lp.
inline constexpr int kBruteForceMaxVars = 6;
inline constexpr int kBruteForceMaxConstraints = 20;

/// Exact optimum by vertex enumeration. Counts rows of A_eq, A_ub and finite
/// bounds as constraints; throws std::invalid_argument above the size caps or
/// when the feasible set is not pointed (contains a line).
LpSolution brute_force_lp(const LinearProgram& lp);

struct LpResiduals {
  double eq = 0.0;      ///< max |A_eq x - b_eq|
  double ub = 0.0;      ///< max (A_ub x - b_ub)_+
  double bounds = 0.0;  ///< max bound violation

  double max() const noexcept;
};

LpResiduals residuals(const LinearProgram& lp, const Vector& x);

}  // namespace condg
