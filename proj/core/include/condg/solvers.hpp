#pragma once

// Generalized multiobjective conditional gradient methods.
//
// Both methods iterate x+ = x + t (s(x) - x), where s(x) solves the gap
// subproblem, and stop once |theta(x)| <= epsilon.
//
//   PGM: t = min{1, (|theta| / (M_nu ||s - x||^{1+nu}))^{1/nu}}, which needs
//        the Hölder pair (nu, M_nu).
//   FGM: parameter-free; t = min{1, |theta| / (2 L ||s - x||^2)} where L is
//        found by halving the previous estimate and doubling until the
//        quadratic upper model holds for every objective.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "condg/gap.hpp"

namespace condg {

struct SolverConfig {
  double epsilon = 1e-4;
  int max_outer = 1000;
  double l_init = 1.0;
  int max_inner = 60;
  double descent_slack = 1e-10;

  void validate() const;
};

enum class SolverKind { pgm, fgm };
enum class RunStatus { converged, max_iter_reached, error };

std::string_view to_string(SolverKind k) noexcept;
std::string_view to_string(RunStatus s) noexcept;
SolverKind parse_solver_kind(std::string_view s);
RunStatus parse_run_status(std::string_view s);

struct IterationRecord {
  int k = 0;
  Vector x;
  Vector f_x;
  double theta = 0.0;
  double s_minus_x_norm = 0.0;
  /// Absent on the terminal record (no step taken from it).
  std::optional<double> step;
  std::optional<double> l_k;  ///< FGM only
  int inner_trials = 0;       ///< FGM only
  long long fevals_so_far = 0;
};

struct RunCounters {
  int iter = 0;
  long long feval = 0;
  long long jeval = 0;
  long long lp_solves = 0;
};

struct RunResult {
  SolverKind solver = SolverKind::pgm;
  RunStatus status = RunStatus::error;
  std::string message;
  std::vector<IterationRecord> records;
  Vector final_x;
  RunCounters counters;
  double wall_time_s = 0.0;
  SolverConfig config;

  double final_theta() const { return records.empty() ? 0.0 : records.back().theta; }
};

/// F = H + G. Case i returns +inf components outside the box.
Vector evaluate_f(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x,
                  EvalCounters* counters = nullptr);

/// min{1, (|theta| / (M ||s-x||^{1+nu}))^{1/nu}}. Throws std::invalid_argument
/// for theta >= 0 or a zero step norm.
double pgm_step_size(double theta, double s_minus_x_norm, const HolderParams& holder);

/// Right-hand side of the line-search acceptance test for one objective:
/// f_k + (-t |theta| / 2 + L t^2 ||s - x||^2 / 2).
double fgm_acceptance_bound(double f_k, double t, double abs_theta, double l,
                            double s_minus_x_norm);

struct LineSearchResult {
  double l_k = 0.0;
  double t_k = 0.0;
  Vector x_next;
  Vector f_next;
  int trials = 0;
  long long fevals = 0;
  long long lp_solves = 0;
};

/// Trials L = 2^{l-1} l_prev for l = 0, 1, ... up to cfg.max_inner trials.
/// Throws NumericalError when the cap is exhausted.
LineSearchResult fgm_line_search(const ProblemInstance& p, const NonsmoothModel& model,
                                 const Vector& x, const Vector& f_x, const GapResult& gap,
                                 double l_prev, const SolverConfig& cfg);

RunResult run_pgm(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x0,
                  const SolverConfig& cfg = {});
RunResult run_fgm(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x0,
                  const SolverConfig& cfg = {});
RunResult run_solver(SolverKind kind, const ProblemInstance& p, const NonsmoothModel& model,
                     const Vector& x0, const SolverConfig& cfg = {});

}  // namespace condg
