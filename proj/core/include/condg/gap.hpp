#pragma once

// The gap function
//
//   theta(x) = min_u max_i { g_i(u) - g_i(x) + <grad h_i(x), u - x> }
//
// and a minimizer s(x), computed through linear programs: for box indicators
// the epigraph LP in (u, tau); for polytope support functions the LP in
// (tau, u, w_1..w_m) obtained by dualizing each inner max.

#include "condg/nonsmooth.hpp"
#include "condg/problems.hpp"

namespace condg {

struct GapResult {
  double theta = 0.0;   ///< min(tau*, 0)
  Vector s;             ///< minimizer, inside the domain box
  Vector per_objective; ///< g_i(s) - g_i(x) + <grad h_i(x), s - x>
  long long fevals_charged = 0;  ///< g evaluations at x (Case ii: m)
  long long lp_solves = 0;
  double raw_tau = 0.0;          ///< LP value before clamping

  double step_norm(const Vector& x) const { return (s - x).norm(); }
};

GapResult solve_gap_case_i(const ProblemInstance& p, const IndicatorModel& model, const Vector& x);

/// Also throws NumericalError when the returned u violates C_i^T w_i = u by
/// more than kEncodingTol.
GapResult solve_gap_case_ii(const ProblemInstance& p, const SupportFunctionModel& model,
                            const Vector& x);

GapResult solve_gap(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x);

/// LP used by solve_gap_case_i (variables u_1..u_n, tau).
LinearProgram gap_lp_case_i(const Matrix& jac, const BoxBounds& box, const Vector& x);

/// LP used by solve_gap_case_ii (variables tau, u_1..u_n, w_1, ..., w_m with
/// w_i in R^{2n}); g_x holds g_i(x).
LinearProgram gap_lp_case_ii(const Matrix& jac, const SupportFunctionModel& model,
                             const Vector& x, const Vector& g_x);

inline constexpr double kEncodingTol = 1e-7;
inline constexpr int kBruteForceGapMaxDim = 3;

/// Exhaustive minimization of the inner max over a uniform grid (grid_per_dim
/// nodes per axis) of the domain box, with x itself as an extra candidate.
/// Test oracle; n <= 3.
GapResult brute_force_gap(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x,
                          int grid_per_dim);

}  // namespace condg
