#pragma once

// Shared oracles and generators for the test binaries.

#include <algorithm>
#include <cmath>
#include <vector>

#include "condg/lp.hpp"
#include "condg/problems.hpp"
#include "condg/rng.hpp"
#include "condg/theory.hpp"

namespace condg::testing {

/// Central differences with step 1e-5 (1 + |x_j|).
inline Matrix finite_difference_jacobian(const ProblemInstance& p, const Vector& x) {
  Matrix j(p.m(), p.n());
  for (int c = 0; c < p.n(); ++c) {
    const double h = 1e-5 * (1.0 + std::abs(x[c]));
    Vector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    j.col(c) = (evaluate_h(p, xp) - evaluate_h(p, xm)) / (2.0 * h);
  }
  return j;
}

/// Largest entrywise relative error max |a - b| / (1 + |b|).
inline double relative_error(const Matrix& a, const Matrix& b) {
  return ((a - b).array().abs() / (1.0 + b.array().abs())).maxCoeff();
}

/// Random LP within the brute-force caps: 2..4 variables with finite lower
/// bounds (so the feasible set is pointed), 2..5 inequalities, optionally one
/// equality and some infinite upper bounds.
inline LinearProgram random_small_lp(Rng& rng) {
  const int n = 2 + static_cast<int>(rng.uniform() * 3);
  const int mu = 2 + static_cast<int>(rng.uniform() * 4);
  LinearProgram lp = LinearProgram::with_variables(n);
  for (int j = 0; j < n; ++j) {
    lp.objective[j] = rng.uniform(-1, 1);
    lp.lower[j] = rng.uniform(-2, 0);
    lp.upper[j] = rng.uniform() < 0.25 ? kInf : lp.lower[j] + rng.uniform(0.5, 3);
  }
  lp.a_ub = Matrix(mu, n);
  lp.b_ub = Vector(mu);
  for (int i = 0; i < mu; ++i) {
    for (int j = 0; j < n; ++j) lp.a_ub(i, j) = rng.uniform(-1, 1);
    lp.b_ub[i] = rng.uniform(-0.5, 2);
  }
  if (rng.uniform() < 0.3) {
    lp.a_eq = Matrix(1, n);
    for (int j = 0; j < n; ++j) lp.a_eq(0, j) = rng.uniform(-1, 1);
    lp.b_eq = Vector::Constant(1, rng.uniform(-0.5, 0.5));
  }
  return lp;
}

/// Random recurrence constants: c in (0.05, 0.95), alpha in (0.5, 3),
/// A in (0.1, 10), gamma0 in (0, 50).
inline RecurrenceParams random_recurrence_params(Rng& rng) {
  RecurrenceParams r;
  r.c = rng.uniform(0.05, 0.95);
  r.alpha = rng.uniform(0.5, 3.0);
  r.a = rng.uniform(0.1, 10.0);
  r.gamma0 = rng.uniform(1e-3, 50.0);
  return r;
}

/// Counts k in [k0, steps] with gamma_k > Gamma_k (plus relative slack 1e-12),
/// simulating gamma_{k+1} = gamma_k - c gamma_k min{1, gamma_k^alpha / A}.
inline int recurrence_violations(const RecurrenceParams& r, int steps) {
  std::vector<double> gamma{r.gamma0};
  for (int k = 0; k < steps; ++k) {
    const double g = gamma.back();
    gamma.push_back(g - r.c * g * std::min(1.0, std::pow(g, r.alpha) / r.a));
  }
  const int k0 = recurrence_k0(r);
  int bad = 0;
  for (int k = k0; k <= steps; ++k) {
    const double bound = recurrence_envelope(r, k, gamma[k0]).gamma_bound;
    if (gamma[k] > bound * (1 + 1e-12)) ++bad;
  }
  return bad;
}

}  // namespace condg::testing
