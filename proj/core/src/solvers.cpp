#include "condg/solvers.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace condg {

void SolverConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be positive");
  if (max_outer < 1) throw std::invalid_argument("SolverConfig: max_outer must be >= 1");
  if (!(l_init > 0.0)) throw std::invalid_argument("SolverConfig: l_init must be positive");
  if (max_inner < 1) throw std::invalid_argument("SolverConfig: max_inner must be >= 1");
  if (!(descent_slack >= 0.0)) throw std::invalid_argument("SolverConfig: descent_slack >= 0");
}

std::string_view to_string(SolverKind k) noexcept { return k == SolverKind::pgm ? "pgm" : "fgm"; }

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iter_reached: return "Failed";
    case RunStatus::error: return "error";
  }
  return "error";
}

SolverKind parse_solver_kind(std::string_view s) {
  if (s == "pgm") return SolverKind::pgm;
  if (s == "fgm") return SolverKind::fgm;
  throw std::invalid_argument("unknown solver: " + std::string(s));
}

RunStatus parse_run_status(std::string_view s) {
  if (s == "converged") return RunStatus::converged;
  if (s == "Failed") return RunStatus::max_iter_reached;
  if (s == "error") return RunStatus::error;
  throw std::invalid_argument("unknown run status: " + std::string(s));
}

Vector evaluate_f(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x,
                  EvalCounters* counters) {
  Vector f = evaluate_h(p, x);
  for (int i = 0; i < p.m(); ++i) f[i] += evaluate_g(model, i, x, counters);
  return f;
}

double pgm_step_size(double theta, double s_minus_x_norm, const HolderParams& holder) {
  if (!(theta < 0.0)) throw std::invalid_argument("pgm_step_size: theta must be negative");
  if (!(s_minus_x_norm > 0.0)) throw std::invalid_argument("pgm_step_size: ||s - x|| must be positive");
  holder.validate();
  const double ratio = -theta / (holder.m_nu * std::pow(s_minus_x_norm, 1.0 + holder.nu));
  if (ratio >= 1.0) return 1.0;
  return std::pow(ratio, 1.0 / holder.nu);
}

double fgm_acceptance_bound(double f_k, double t, double abs_theta, double l,
                            double s_minus_x_norm) {
  const double dd = s_minus_x_norm * s_minus_x_norm;
  return f_k + (-0.5 * t * abs_theta + 0.5 * l * t * t * dd);
}

LineSearchResult fgm_line_search(const ProblemInstance& p, const NonsmoothModel& model,
                                 const Vector& x, const Vector& f_x, const GapResult& gap,
                                 double l_prev, const SolverConfig& cfg) {
  const double abs_theta = -gap.theta;
  const double norm = gap.step_norm(x);
  if (!(abs_theta > 0.0) || !(norm > 0.0)) {
    throw std::invalid_argument("fgm_line_search: needs theta < 0 and s != x");
  }
  const BoxBounds& dom = domain_of(model);
  const Vector d = gap.s - x;
  const double dd = norm * norm;

  LineSearchResult out;
  EvalCounters ec;
  for (int ell = 0; ell < cfg.max_inner; ++ell) {
    const double l = std::ldexp(l_prev, ell - 1);
    const double t = std::min(1.0, abs_theta / (2.0 * l * dd));
    Vector candidate = dom.project(x + t * d);
    Vector f_c = evaluate_f(p, model, candidate, &ec);
    ++out.trials;
    ++out.fevals;
    bool accepted = true;
    for (int i = 0; i < p.m() && accepted; ++i) {
      accepted = f_c[i] <= fgm_acceptance_bound(f_x[i], t, abs_theta, l, norm);
    }
    if (accepted) {
      out.l_k = l;
      out.t_k = t;
      out.x_next = std::move(candidate);
      out.f_next = std::move(f_c);
      out.lp_solves = ec.lp_solves;
      return out;
    }
  }
  throw NumericalError("FGM line search exhausted " + std::to_string(cfg.max_inner) + " trials");
}

namespace {

RunResult run_impl(SolverKind kind, const ProblemInstance& p, const NonsmoothModel& model,
                   const Vector& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (kind == SolverKind::pgm) p.holder.validate();
  const auto start = std::chrono::steady_clock::now();

  RunResult res;
  res.solver = kind;
  res.config = cfg;
  const BoxBounds& dom = domain_of(model);
  if (x0.size() != p.n()) throw std::invalid_argument("run: starting point has wrong dimension");
  Vector x = x0;
  if (!dom.contains(x)) {
    std::cerr << "warning: starting point outside dom(G); projecting onto the box\n";
    x = dom.project(x);
  }

  EvalCounters ec;
  try {
    Vector fx = evaluate_f(p, model, x, &ec);
    double l_prev = cfg.l_init;
    for (int k = 0;; ++k) {
      const GapResult gap = solve_gap(p, model, x);
      ++res.counters.jeval;
      res.counters.lp_solves += gap.lp_solves;

      IterationRecord rec;
      rec.k = k;
      rec.x = x;
      rec.f_x = fx;
      rec.theta = gap.theta;
      rec.s_minus_x_norm = gap.step_norm(x);
      rec.fevals_so_far = res.counters.feval;
      res.counters.iter = k;

      if (std::abs(gap.theta) <= cfg.epsilon) {
        res.status = RunStatus::converged;
        res.records.push_back(std::move(rec));
        break;
      }
      if (rec.s_minus_x_norm == 0.0) {
        res.status = RunStatus::converged;
        res.message = "s(x) == x with theta = " + std::to_string(gap.theta) + "; treated as stationary";
        std::cerr << "warning: " << res.message << '\n';
        res.records.push_back(std::move(rec));
        break;
      }
      if (k == cfg.max_outer) {
        res.status = RunStatus::max_iter_reached;
        res.records.push_back(std::move(rec));
        break;
      }

      Vector x_next;
      Vector f_next;
      if (kind == SolverKind::pgm) {
        const double t = pgm_step_size(gap.theta, rec.s_minus_x_norm, p.holder);
        x_next = dom.project(x + t * (gap.s - x));
        f_next = evaluate_f(p, model, x_next, &ec);
        rec.step = t;
      } else {
        LineSearchResult ls = fgm_line_search(p, model, x, fx, gap, l_prev, cfg);
        res.counters.feval += ls.fevals;
        res.counters.lp_solves += ls.lp_solves;
        rec.step = ls.t_k;
        rec.l_k = ls.l_k;
        rec.inner_trials = ls.trials;
        l_prev = ls.l_k;
        x_next = std::move(ls.x_next);
        f_next = std::move(ls.f_next);
      }

      const double rise = (f_next - fx).maxCoeff();
      res.records.push_back(std::move(rec));
      if (!(rise <= cfg.descent_slack)) {
        res.status = RunStatus::error;
        res.message = "descent violated at k=" + std::to_string(k) + " (increase " +
                      std::to_string(rise) + "); Hölder constant likely too small";
        x = std::move(x_next);
        break;
      }
      x = std::move(x_next);
      fx = std::move(f_next);
    }
  } catch (const std::exception& e) {
    res.status = RunStatus::error;
    res.message = e.what();
  }

  res.counters.lp_solves += ec.lp_solves;
  res.final_x = x;
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace

RunResult run_pgm(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x0,
                  const SolverConfig& cfg) {
  return run_impl(SolverKind::pgm, p, model, x0, cfg);
}

RunResult run_fgm(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x0,
                  const SolverConfig& cfg) {
  return run_impl(SolverKind::fgm, p, model, x0, cfg);
}

RunResult run_solver(SolverKind kind, const ProblemInstance& p, const NonsmoothModel& model,
                     const Vector& x0, const SolverConfig& cfg) {
  return run_impl(kind, p, model, x0, cfg);
}

}  // namespace condg
