#include "condg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace condg {

LinearProgram LinearProgram::with_variables(int n) {
  LinearProgram lp;
  lp.objective = Vector::Zero(n);
  lp.a_eq = Matrix::Zero(0, n);
  lp.b_eq = Vector::Zero(0);
  lp.a_ub = Matrix::Zero(0, n);
  lp.b_ub = Vector::Zero(0);
  lp.lower = Vector::Constant(n, -kInf);
  lp.upper = Vector::Constant(n, kInf);
  return lp;
}

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (a_eq.cols() != n || a_ub.cols() != n) {
    throw std::invalid_argument("LinearProgram: constraint matrices must have one column per variable");
  }
  if (a_eq.rows() != b_eq.size() || a_ub.rows() != b_ub.size()) {
    throw std::invalid_argument("LinearProgram: right-hand side size mismatch");
  }
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("LinearProgram: bounds size mismatch");
  }
  if (!objective.allFinite() || !a_eq.allFinite() || !b_eq.allFinite() || !a_ub.allFinite() ||
      !b_ub.allFinite()) {
    throw std::invalid_argument("LinearProgram: non-finite coefficient");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] == kInf || upper[j] == -kInf) {
      throw std::invalid_argument("LinearProgram: invalid bound");
    }
  }
}

std::string_view to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

double LpResiduals::max() const noexcept { return std::max({eq, ub, bounds}); }

LpResiduals residuals(const LinearProgram& lp, const Vector& x) {
  LpResiduals r;
  if (lp.num_eq() > 0) r.eq = (lp.a_eq * x - lp.b_eq).cwiseAbs().maxCoeff();
  if (lp.num_ub() > 0) r.ub = std::max(0.0, (lp.a_ub * x - lp.b_ub).maxCoeff());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    r.bounds = std::max({r.bounds, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  }
  return r;
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kDegenerateStep = 1e-12;

// x_j = offset + sign * y[pos] - y[neg]
struct VarMap {
  int pos = -1;
  int neg = -1;
  double offset = 0.0;
  double sign = 1.0;
};

// min cost.y  s.t.  a y = b, y >= 0, b >= 0, rows scaled to unit max-norm.
struct StandardForm {
  Matrix a;
  Vector b;
  Vector cost;
  std::vector<int> slack_basis;  // +1 slack column usable as initial basic, or -1
  std::vector<VarMap> vars;
};

std::optional<StandardForm> to_standard_form(const LinearProgram& lp, double feas_tol) {
  const int n = lp.num_vars();
  StandardForm sf;
  sf.vars.resize(n);
  int cols = 0;
  std::vector<std::pair<int, double>> bound_rows;
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower[j];
    double hi = lp.upper[j];
    if (lo > hi) {
      if (lo - hi > feas_tol) return std::nullopt;
      hi = lo;
    }
    VarMap& v = sf.vars[j];
    if (std::isfinite(lo)) {
      v.pos = cols++;
      v.offset = lo;
      if (std::isfinite(hi)) bound_rows.emplace_back(v.pos, hi - lo);
    } else if (std::isfinite(hi)) {
      v.pos = cols++;
      v.offset = hi;
      v.sign = -1.0;
    } else {
      v.pos = cols++;
      v.neg = cols++;
    }
  }
  const int n_struct = cols;
  const int p = lp.num_eq();
  const int q = lp.num_ub();
  const int nb = static_cast<int>(bound_rows.size());
  const int rows = p + q + nb;
  const int total_cols = n_struct + q + nb;

  sf.a = Matrix::Zero(rows, total_cols);
  sf.b = Vector::Zero(rows);
  sf.cost = Vector::Zero(total_cols);
  sf.slack_basis.assign(rows, -1);

  auto map_row = [&](const auto& coeffs, int r, double rhs) {
    double shift = 0.0;
    for (int j = 0; j < n; ++j) {
      const double c = coeffs(j);
      if (c == 0.0) continue;
      const VarMap& v = sf.vars[j];
      shift += c * v.offset;
      sf.a(r, v.pos) += c * v.sign;
      if (v.neg >= 0) sf.a(r, v.neg) -= c;
    }
    sf.b[r] = rhs - shift;
  };

  for (int i = 0; i < p; ++i) map_row(lp.a_eq.row(i), i, lp.b_eq[i]);
  for (int i = 0; i < q; ++i) {
    map_row(lp.a_ub.row(i), p + i, lp.b_ub[i]);
    sf.a(p + i, n_struct + i) = 1.0;
  }
  for (int k = 0; k < nb; ++k) {
    const int r = p + q + k;
    sf.a(r, bound_rows[k].first) = 1.0;
    sf.a(r, n_struct + q + k) = 1.0;
    sf.b[r] = bound_rows[k].second;
  }
  for (int j = 0; j < n; ++j) {
    const VarMap& v = sf.vars[j];
    sf.cost[v.pos] += lp.objective[j] * v.sign;
    if (v.neg >= 0) sf.cost[v.neg] -= lp.objective[j];
  }

  for (int r = 0; r < rows; ++r) {
    if (sf.b[r] < 0.0) {
      sf.a.row(r) *= -1.0;
      sf.b[r] = -sf.b[r];
    }
    if (r >= p) {
      const int slack = n_struct + (r - p);
      if (sf.a(r, slack) > 0.0) sf.slack_basis[r] = slack;
    }
    const double scale = sf.a.row(r).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      sf.a.row(r) /= scale;
      sf.b[r] /= scale;
    }
  }
  return sf;
}

enum class Outcome { optimal, unbounded, cap_reached };

struct Simplex {
  Matrix t;  // (rows + 1) x (cols + 1); last row: reduced costs | -objective
  std::vector<int> basis;
  int rows = 0;
  int cols = 0;
  int pivots = 0;
  int cap = 0;
  int degenerate = 0;
  bool bland = false;

  int rhs() const { return cols; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i <= rows; ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f != 0.0) t.row(i) -= f * t.row(r);
      t(i, c) = 0.0;
    }
    t(r, c) = 1.0;
    basis[r] = c;
  }

  Outcome run(const std::vector<char>& allowed, const LpOptions& o) {
    for (;;) {
      int enter = -1;
      double best = -o.opt_tol;
      for (int j = 0; j < cols; ++j) {
        if (!allowed[j]) continue;
        const double d = t(rows, j);
        if (bland) {
          if (d < -o.opt_tol) {
            enter = j;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter < 0) return Outcome::optimal;
      if (pivots >= cap) return Outcome::cap_reached;

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < rows; ++i) {
        const double a = t(i, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(t(i, rhs()), 0.0) / a;
        const double tie = 1e-12 * (1.0 + std::abs(best_ratio == kInf ? ratio : best_ratio));
        if (leave < 0 || ratio < best_ratio - tie) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie) {
          const bool take = bland ? basis[i] < basis[leave] : a > t(leave, enter);
          if (take) {
            leave = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leave < 0) return Outcome::unbounded;
      if (best_ratio <= kDegenerateStep && ++degenerate > o.bland_after) bland = true;
      pivot(leave, enter);
      ++pivots;
    }
  }
};

bool rows_feasible(const Matrix& a, const Vector& b, const Vector& x, double tol, bool equality) {
  const double xs = std::max(1.0, x.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double lhs = a.row(i).dot(x);
    const double scale = std::max({1.0, std::abs(b[i]), a.row(i).cwiseAbs().maxCoeff() * xs});
    const double viol = equality ? std::abs(lhs - b[i]) : lhs - b[i];
    if (viol > tol * scale) return false;
  }
  return true;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double feas_tol) {
  LpOptions o;
  o.feas_tol = feas_tol;
  return solve_lp(lp, o);
}

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& o) {
  lp.validate();
  LpSolution out;
  const int n = lp.num_vars();
  out.x = Vector::Zero(n);

  auto sf_opt = to_standard_form(lp, o.feas_tol);
  if (!sf_opt) {
    out.status = LpStatus::infeasible;
    return out;
  }
  const StandardForm& sf = *sf_opt;
  const int rows = static_cast<int>(sf.a.rows());
  const int cols = static_cast<int>(sf.a.cols());

  std::vector<int> art_row;
  for (int r = 0; r < rows; ++r) {
    if (sf.slack_basis[r] < 0) art_row.push_back(r);
  }
  const int n_art = static_cast<int>(art_row.size());

  Simplex s;
  s.rows = rows;
  s.cols = cols + n_art;
  s.cap = o.cap_factor * (rows + cols);
  s.t = Matrix::Zero(rows + 1, s.cols + 1);
  s.t.topLeftCorner(rows, cols) = sf.a;
  s.t.block(0, s.rhs(), rows, 1) = sf.b;
  s.basis.assign(rows, -1);
  for (int r = 0; r < rows; ++r) s.basis[r] = sf.slack_basis[r];
  for (int k = 0; k < n_art; ++k) {
    s.t(art_row[k], cols + k) = 1.0;
    s.basis[art_row[k]] = cols + k;
  }

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (int k = 0; k < n_art; ++k) s.t(rows, cols + k) = 1.0;
    for (int r : art_row) s.t.row(rows) -= s.t.row(r);
    std::vector<char> allowed(s.cols, 1);
    const Outcome ph1 = s.run(allowed, o);
    if (ph1 != Outcome::optimal) {
      out.status = LpStatus::numerical_failure;
      out.pivots = s.pivots;
      return out;
    }
    const double infeas = -s.t(rows, s.rhs());
    const double bscale = 1.0 + (rows > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0);
    if (infeas > o.feas_tol * bscale) {
      out.status = LpStatus::infeasible;
      out.pivots = s.pivots;
      return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < rows; ++r) {
      if (s.basis[r] < cols) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < cols; ++j) {
        if (std::abs(s.t(r, j)) > best_abs) {
          best_abs = std::abs(s.t(r, j));
          best = j;
        }
      }
      if (best >= 0) s.pivot(r, best);
    }
  }

  // Phase 2.
  const double cscale = std::max(1.0, sf.cost.cwiseAbs().maxCoeff());
  s.t.row(rows).setZero();
  s.t.block(rows, 0, 1, cols) = (sf.cost / cscale).transpose();
  for (int r = 0; r < rows; ++r) {
    const int bcol = s.basis[r];
    const double cb = bcol < cols ? sf.cost[bcol] / cscale : 0.0;
    if (cb != 0.0) s.t.row(rows) -= cb * s.t.row(r);
  }
  std::vector<char> allowed(s.cols, 0);
  std::fill(allowed.begin(), allowed.begin() + cols, 1);
  s.degenerate = 0;
  const Outcome ph2 = s.run(allowed, o);
  out.pivots = s.pivots;
  if (ph2 == Outcome::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }
  if (ph2 == Outcome::cap_reached) {
    out.status = LpStatus::numerical_failure;
    return out;
  }

  Vector y = Vector::Zero(cols);
  for (int r = 0; r < rows; ++r) {
    if (s.basis[r] < cols) y[s.basis[r]] = std::max(s.t(r, s.rhs()), 0.0);
  }

  // Recompute the basic solution from the original (scaled) data to shed
  // accumulated tableau rounding.
  if (rows > 0) {
    Matrix bmat(rows, rows);
    for (int r = 0; r < rows; ++r) {
      const int bcol = s.basis[r];
      if (bcol < cols) {
        bmat.col(r) = sf.a.col(bcol);
      } else {
        bmat.col(r).setZero();
        bmat(art_row[bcol - cols], r) = 1.0;
      }
    }
    Eigen::FullPivLU<Matrix> lu(bmat);
    if (lu.isInvertible()) {
      const Vector xb = lu.solve(sf.b);
      if (xb.allFinite() && (xb.array() >= -o.feas_tol).all()) {
        Vector refined = Vector::Zero(cols);
        for (int r = 0; r < rows; ++r) {
          if (s.basis[r] < cols) refined[s.basis[r]] = std::max(xb[r], 0.0);
        }
        if ((sf.a * refined - sf.b).cwiseAbs().maxCoeff() <=
            (sf.a * y - sf.b).cwiseAbs().maxCoeff()) {
          y = refined;
        }
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    const VarMap& v = sf.vars[j];
    double xj = v.offset + v.sign * y[v.pos];
    if (v.neg >= 0) xj -= y[v.neg];
    if (xj < lp.lower[j] && lp.lower[j] - xj <= o.feas_tol) xj = lp.lower[j];
    if (xj > lp.upper[j] && xj - lp.upper[j] <= o.feas_tol) xj = lp.upper[j];
    out.x[j] = xj;
  }
  out.objective_value = lp.objective.dot(out.x);

  const bool ok = rows_feasible(lp.a_eq, lp.b_eq, out.x, o.feas_tol, true) &&
                  rows_feasible(lp.a_ub, lp.b_ub, out.x, o.feas_tol, false) &&
                  residuals(lp, out.x).bounds <= o.feas_tol;
  out.status = ok ? LpStatus::optimal : LpStatus::numerical_failure;
  return out;
}

}  // namespace condg
