#pragma once

// Closed-form constants and rate bounds from the convergence analysis of the
// two conditional gradient methods, plus replay checks that assert those
// inequalities on recorded runs.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "condg/solvers.hpp"

namespace condg {

/// L(eps) = ((1-nu)/(1+nu) / (2 eps))^{(1-nu)/(1+nu)} M^{2/(1+nu)}.
double smoothing_constant(double nu, double m_nu, double eps);

/// Sufficient line-search constant
/// max{ L(|theta|/2), L(theta^2 / (4 ||s-x||^2))^{(1+nu)/(2 nu)} }.
double linesearch_threshold(double theta, double s_minus_x_norm, const HolderParams& holder);

/// Upper envelope of linesearch_threshold over a domain of diameter D, as a
/// function of xi = |theta|.
double envelope_L_bar(double xi, double diameter, const HolderParams& holder);

struct RateInputs {
  double diameter = 1.0;
  double f0_max = 0.0;
  double f_inf = 0.0;
  HolderParams holder;

  void validate() const;
};

/// Bound on min_{j<=k} |theta(x^j)| for PGM.
double rate_bound_pgm(const RateInputs& in, int k);

/// Bound on min_{j<=k} |theta(x^j)| for FGM; requires k >= k_tilde0.
double rate_bound_fgm(const RateInputs& in, int k, int k_tilde0);

/// ceil(max(0, log2(l_init / l_tilde0))).
int burn_in_index(double l_init, double l_tilde0);

/// Constants of the recurrence gamma_{k+1} <= gamma_k - c beta_k min{1, beta_k^alpha / A}.
struct RecurrenceParams {
  double c = 0.5;
  double alpha = 1.0;
  double a = 1.0;
  double gamma0 = 0.0;

  void validate() const;
};

struct RecurrenceEnvelope {
  double gamma_bound = 0.0;
  int k0 = 0;
};

/// k0 = ceil((1/c) max(0, log(gamma0 / (c A^{1/alpha})))).
int recurrence_k0(const RecurrenceParams& params);

/// Gamma_k = (gamma_{k0}^{-alpha} + c alpha (k - k0) / A)^{-1/alpha}. When
/// gamma_at_k0 is omitted, gamma0 stands in as an upper bound on gamma_{k0}.
/// Throws std::invalid_argument for k < k0.
RecurrenceEnvelope recurrence_envelope(const RecurrenceParams& params, int k,
                                       std::optional<double> gamma_at_k0 = std::nullopt);

/// Pass/fail tally for one named inequality.
struct CheckTally {
  long long checked = 0;
  long long violated = 0;
  double worst_excess = 0.0;  ///< max (lhs - rhs) over violations
  int first_violation_k = -1;
};

struct TheoryReport {
  std::map<std::string, CheckTally> checks;
  std::vector<std::string> notes;
  std::optional<int> k_tilde0;  ///< FGM only

  /// Records one evaluation of lhs <= rhs + tol.
  void record(const std::string& name, int k, double lhs, double rhs, double tol = 0.0);
  long long violations(const std::string& name) const;
  long long total_violations() const;
  bool clean() const { return total_violations() == 0; }
  void merge(const TheoryReport& other);
};

struct ReplayOptions {
  /// Absolute slack of the PGM decrease inequality.
  double decrease_tol = 1e-9;
  /// Re-evaluate F at accepted FGM iterates instead of trusting the trace.
  bool reevaluate = true;
  bool check_rates = true;
};

RateInputs make_rate_inputs(const RunResult& run, const ProblemInstance& p,
                            const NonsmoothModel& model);

/// Recurrence constants for the convex-case envelope of each solver.
RecurrenceParams convex_recurrence_params(SolverKind solver, const HolderParams& holder,
                                          double diameter, double gamma0);

/// Replays every per-iteration inequality that applies to the run's solver:
///   monotonicity        F(x^{k+1}) <= F(x^k) + descent_slack
///   pgm_decrease        per-step decrease lower bound (PGM)
///   fgm_acceptance      accepted (L_k, t_k) passes the acceptance test (FGM)
///   fgm_descent         -(|theta|/4) min{1, |theta| / (2 L_k ||s-x||^2)} (FGM)
///   fgm_inner_cap       line search stayed below max_inner trials (FGM)
///   fgm_l_bound         L_k <= 2 max_{j<=k} Ltilde_j for k >= k_tilde0 (FGM)
///   l_tilde_envelope    Ltilde_k <= Lbar(|theta_k|)
///   rate_pgm / rate_fgm min_{j<=k} |theta_j| against the sublinear rate bound
///   in_domain           iterates stay in the domain box
TheoryReport replay_run(const RunResult& run, const ProblemInstance& p,
                        const NonsmoothModel& model, const ReplayOptions& opts = {});

/// Convex-case checks against a reference point x_star:
///   convex_sandwich  0 <= delta_k <= |theta_k|, delta_k = min_i (F_i(x^k) - F_i(x*))
///   convex_envelope  delta_k <= Gamma_k from recurrence_envelope
/// Skipped with a note when F(x*) does not dominate some recorded F(x^k).
TheoryReport convex_rate_check(const RunResult& run, const Vector& x_star,
                               const ProblemInstance& p, const NonsmoothModel& model);

}  // namespace condg
