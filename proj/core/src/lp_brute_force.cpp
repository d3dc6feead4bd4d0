#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "condg/lp.hpp"

namespace condg {
namespace {

constexpr double kVertexTol = 1e-9;

struct Vertex {
  Vector x;
  double value;
};

// Minimum of c.x over the vertices of {E x = f, G x <= h}. Assumes
// rank([E; G]) == n so every nonempty face contains a vertex.
std::optional<Vertex> min_over_vertices(const Matrix& e, const Vector& f, const Matrix& g,
                                        const Vector& h, const Vector& c) {
  const int n = static_cast<int>(c.size());
  const int p = static_cast<int>(e.rows());
  const int q = static_cast<int>(g.rows());
  const int rank_e = p == 0 ? 0 : static_cast<int>(Eigen::FullPivLU<Matrix>(e).rank());
  const int k = n - rank_e;
  if (k < 0 || k > q) return std::nullopt;

  std::optional<Vertex> best;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  Matrix m(p + k, n);
  Vector rhs(p + k);
  if (p > 0) {
    m.topRows(p) = e;
    rhs.head(p) = f;
  }
  for (;;) {
    for (int a = 0; a < k; ++a) {
      m.row(p + a) = g.row(idx[a]);
      rhs[p + a] = h[idx[a]];
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    if (qr.rank() == n) {
      const Vector x = qr.solve(rhs);
      const double xs = std::max(1.0, x.cwiseAbs().maxCoeff());
      bool ok = x.allFinite();
      for (int i = 0; ok && i < p + k; ++i) {
        ok = std::abs(m.row(i).dot(x) - rhs[i]) <= kVertexTol * std::max(1.0, std::abs(rhs[i]) + xs);
      }
      for (int i = 0; ok && i < q; ++i) {
        ok = g.row(i).dot(x) - h[i] <= kVertexTol * std::max(1.0, std::abs(h[i]) + xs);
      }
      if (ok) {
        const double v = c.dot(x);
        if (!best || v < best->value) best = Vertex{x, v};
      }
    }
    // next combination
    int a = k - 1;
    while (a >= 0 && idx[a] == q - k + a) --a;
    if (a < 0) break;
    ++idx[a];
    for (int b = a + 1; b < k; ++b) idx[b] = idx[b - 1] + 1;
  }
  return best;
}

}  // namespace

LpSolution brute_force_lp(const LinearProgram& lp) {
  lp.validate();
  const int n = lp.num_vars();
  int n_bounds = 0;
  for (int j = 0; j < n; ++j) {
    n_bounds += std::isfinite(lp.lower[j]) ? 1 : 0;
    n_bounds += std::isfinite(lp.upper[j]) ? 1 : 0;
  }
  const int total = lp.num_eq() + lp.num_ub() + n_bounds;
  if (n > kBruteForceMaxVars || total > kBruteForceMaxConstraints) {
    throw std::invalid_argument("brute_force_lp: instance above the enumeration size cap");
  }

  const int q = lp.num_ub() + n_bounds;
  Matrix g = Matrix::Zero(q, n);
  Vector h = Vector::Zero(q);
  g.topRows(lp.num_ub()) = lp.a_ub;
  h.head(lp.num_ub()) = lp.b_ub;
  int r = lp.num_ub();
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      g(r, j) = -1.0;
      h[r++] = -lp.lower[j];
    }
    if (std::isfinite(lp.upper[j])) {
      g(r, j) = 1.0;
      h[r++] = lp.upper[j];
    }
  }

  Matrix all(lp.num_eq() + q, n);
  all << lp.a_eq, g;
  if (n > 0 && Eigen::FullPivLU<Matrix>(all).rank() < n) {
    throw std::invalid_argument("brute_force_lp: feasible set is not pointed");
  }

  LpSolution out;
  out.x = Vector::Zero(n);
  const auto vertex = min_over_vertices(lp.a_eq, lp.b_eq, g, h, lp.objective);
  if (!vertex) {
    out.status = LpStatus::infeasible;
    return out;
  }

  // Recession cone {E d = 0, G d <= 0} cut by c.d >= -1: a negative minimum
  // means an improving ray exists.
  Matrix g_ray(q + 1, n);
  g_ray << g, -lp.objective.transpose();
  Vector h_ray = Vector::Zero(q + 1);
  h_ray[q] = 1.0;
  const auto ray = min_over_vertices(lp.a_eq, Vector::Zero(lp.num_eq()), g_ray, h_ray, lp.objective);
  if (ray && ray->value < -kVertexTol) {
    out.status = LpStatus::unbounded;
    return out;
  }

  out.status = LpStatus::optimal;
  out.x = vertex->x;
  out.objective_value = vertex->value;
  return out;
}

}  // namespace condg
