#include "condg/gap.hpp"

#include <stdexcept>
#include <string>

namespace condg {
namespace {

void require_optimal(const LpSolution& sol, const char* what) {
  if (!sol.optimal()) {
    throw NumericalError(std::string(what) + ": LP returned " + std::string(to_string(sol.status)));
  }
}

}  // namespace

LinearProgram gap_lp_case_i(const Matrix& jac, const BoxBounds& box, const Vector& x) {
  const int n = static_cast<int>(jac.cols());
  const int m = static_cast<int>(jac.rows());
  LinearProgram lp = LinearProgram::with_variables(n + 1);
  lp.objective[n] = 1.0;
  lp.a_ub = Matrix::Zero(m, n + 1);
  lp.a_ub.leftCols(n) = jac;
  lp.a_ub.col(n).setConstant(-1.0);
  lp.b_ub = jac * x;
  lp.lower.head(n) = box.lower();
  lp.upper.head(n) = box.upper();
  return lp;
}

GapResult solve_gap_case_i(const ProblemInstance& p, const IndicatorModel& model, const Vector& x) {
  const int n = p.n();
  const Matrix jac = evaluate_jacobian(p, x);
  const LpSolution sol = solve_lp(gap_lp_case_i(jac, model.box, x));
  require_optimal(sol, "gap oracle (indicator)");

  GapResult r;
  r.lp_solves = 1;
  r.raw_tau = sol.x[n];
  r.s = model.box.project(sol.x.head(n));
  r.per_objective = jac * (r.s - x);
  r.theta = std::min(r.raw_tau, 0.0);
  return r;
}

LinearProgram gap_lp_case_ii(const Matrix& jac, const SupportFunctionModel& model,
                             const Vector& x, const Vector& g_x) {
  const int n = model.dim();
  const int m = model.num_objectives();
  const int wlen = 2 * n;
  const int nvars = 1 + n + wlen * m;
  LinearProgram lp = LinearProgram::with_variables(nvars);
  lp.objective[0] = 1.0;

  lp.a_ub = Matrix::Zero(m, nvars);
  lp.b_ub = Vector::Zero(m);
  lp.a_eq = Matrix::Zero(n * m, nvars);
  lp.b_eq = Vector::Zero(n * m);
  const Vector rhs = model.rhs();
  for (int i = 0; i < m; ++i) {
    const int w0 = 1 + n + wlen * i;
    lp.a_ub(i, 0) = -1.0;
    lp.a_ub.block(i, 1, 1, n) = jac.row(i);
    lp.a_ub.block(i, w0, 1, wlen) = rhs.transpose();
    lp.b_ub[i] = g_x[i] + jac.row(i).dot(x);

    lp.a_eq.block(n * i, w0, n, wlen) = model.c(i).transpose();
    lp.a_eq.block(n * i, 1, n, n) = -Matrix::Identity(n, n);
  }
  lp.lower.segment(1, n) = model.domain().lower();
  lp.upper.segment(1, n) = model.domain().upper();
  lp.lower.tail(wlen * m).setZero();
  return lp;
}

GapResult solve_gap_case_ii(const ProblemInstance& p, const SupportFunctionModel& model,
                            const Vector& x) {
  const int n = p.n();
  const int m = p.m();
  if (model.dim() != n || model.num_objectives() != m) {
    throw std::invalid_argument("solve_gap_case_ii: model does not match problem dimensions");
  }
  EvalCounters counters;
  Vector g_x(m);
  for (int i = 0; i < m; ++i) {
    g_x[i] = evaluate_support(model, i, x, &counters);
    ++counters.g_evals;
  }

  const Matrix jac = evaluate_jacobian(p, x);
  const LpSolution sol = solve_lp(gap_lp_case_ii(jac, model, x, g_x));
  require_optimal(sol, "gap oracle (support function)");

  const Vector u = sol.x.segment(1, n);
  for (int i = 0; i < m; ++i) {
    const Vector w = sol.x.segment(1 + n + 2 * n * i, 2 * n);
    const double resid = (model.c(i).transpose() * w - u).cwiseAbs().maxCoeff();
    if (resid > kEncodingTol) {
      throw NumericalError("gap oracle (support function): C_i^T w_i = u violated by " +
                           std::to_string(resid));
    }
  }

  GapResult r;
  r.raw_tau = sol.x[0];
  r.s = model.domain().project(u);
  r.per_objective = jac * (r.s - x);
  const long long g_evals_at_x = counters.g_evals;
  for (int i = 0; i < m; ++i) {
    r.per_objective[i] += evaluate_support(model, i, r.s, &counters) - g_x[i];
  }
  r.theta = std::min(r.raw_tau, 0.0);
  r.fevals_charged = g_evals_at_x;
  r.lp_solves = counters.lp_solves + 1;
  return r;
}

GapResult solve_gap(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x) {
  if (const auto* ind = std::get_if<IndicatorModel>(&model)) return solve_gap_case_i(p, *ind, x);
  return solve_gap_case_ii(p, std::get<SupportFunctionModel>(model), x);
}

GapResult brute_force_gap(const ProblemInstance& p, const NonsmoothModel& model, const Vector& x,
                          int grid_per_dim) {
  const int n = p.n();
  const int m = p.m();
  if (n > kBruteForceGapMaxDim) throw std::invalid_argument("brute_force_gap: n <= 3 required");
  if (grid_per_dim < 2) throw std::invalid_argument("brute_force_gap: grid_per_dim >= 2");
  const BoxBounds& box = domain_of(model);
  const Matrix jac = evaluate_jacobian(p, x);
  const bool indicator = is_indicator(model);

  EvalCounters counters;
  Vector g_x = Vector::Zero(m);
  if (!indicator) {
    for (int i = 0; i < m; ++i) g_x[i] = evaluate_g(model, i, x, &counters);
  }

  auto inner = [&](const Vector& u, Vector* terms) {
    Vector t = jac * (u - x);
    if (!indicator) {
      for (int i = 0; i < m; ++i) t[i] += evaluate_g(model, i, u, &counters) - g_x[i];
    }
    const double v = t.maxCoeff();
    if (terms) *terms = std::move(t);
    return v;
  };

  GapResult best;
  best.s = x;
  best.theta = inner(x, &best.per_objective);

  std::vector<int> idx(n, 0);
  Vector u(n);
  const Vector step = (box.upper() - box.lower()) / (grid_per_dim - 1);
  for (;;) {
    for (int j = 0; j < n; ++j) {
      u[j] = idx[j] == grid_per_dim - 1 ? box.upper()[j] : box.lower()[j] + idx[j] * step[j];
    }
    const double v = inner(u, nullptr);
    if (v < best.theta) {
      best.theta = v;
      best.s = u;
    }
    int j = 0;
    while (j < n && ++idx[j] == grid_per_dim) idx[j++] = 0;
    if (j == n) break;
  }
  inner(best.s, &best.per_objective);
  best.raw_tau = best.theta;
  best.theta = std::min(best.theta, 0.0);
  best.fevals_charged = indicator ? 0 : m;
  best.lp_solves = counters.lp_solves;
  return best;
}

}  // namespace condg
