#include "condg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace condg {

bool dominates(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dominates: dimension mismatch");
  bool strict = false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] > v[i]) return false;
    if (u[i] < v[i]) strict = true;
  }
  return strict;
}

std::vector<Vector> nondominated_filter(const std::vector<Vector>& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // A dominator is lexicographically smaller, and dominance is transitive, so
  // comparing each point against the survivors seen so far is enough.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vector& u = points[a];
    const Vector& v = points[b];
    return std::lexicographical_compare(u.data(), u.data() + u.size(), v.data(), v.data() + v.size());
  });
  std::vector<char> keep(n, 0);
  std::vector<std::size_t> archive;
  for (std::size_t idx : order) {
    const bool dominated = std::any_of(archive.begin(), archive.end(), [&](std::size_t a) {
      return dominates(points[a], points[idx]);
    });
    if (!dominated) {
      keep[idx] = 1;
      archive.push_back(idx);
    }
  }
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(points[i]);
  }
  return out;
}

bool same_point(const Vector& a, const Vector& b, double tol) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

std::vector<Vector> deduplicate(const std::vector<Vector>& points, double tol) {
  std::vector<Vector> out;
  for (const Vector& p : points) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const Vector& q) { return same_point(p, q, tol); });
    if (!seen) out.push_back(p);
  }
  return out;
}

FrontApproximation FrontApproximation::from_points(std::string tag, const std::vector<Vector>& raw) {
  FrontApproximation f;
  f.solver_tag = std::move(tag);
  f.points = nondominated_filter(deduplicate(raw));
  return f;
}

std::vector<Vector> combined_reference(const std::vector<FrontApproximation>& fronts) {
  std::vector<Vector> all;
  for (const auto& f : fronts) all.insert(all.end(), f.points.begin(), f.points.end());
  return nondominated_filter(deduplicate(all));
}

double purity(const FrontApproximation& front, const std::vector<Vector>& reference) {
  if (front.points.empty()) return reference.empty() ? 1.0 : 0.0;
  std::size_t hits = 0;
  for (const Vector& p : front.points) {
    if (std::any_of(reference.begin(), reference.end(),
                    [&](const Vector& r) { return same_point(p, r); })) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(front.points.size());
}

namespace {

std::vector<double> sorted_coordinate(const std::vector<Vector>& points, int j) {
  std::vector<double> c;
  c.reserve(points.size());
  for (const Vector& p : points) c.push_back(p[j]);
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace

double spread_gamma(const FrontApproximation& front) {
  if (front.points.empty()) throw std::invalid_argument("spread_gamma: empty front");
  const int m = static_cast<int>(front.points.front().size());
  double g = 0.0;
  for (int j = 0; j < m; ++j) {
    const auto c = sorted_coordinate(front.points, j);
    for (std::size_t i = 1; i < c.size(); ++i) g = std::max(g, c[i] - c[i - 1]);
  }
  return g;
}

Extremes extremes_of(const std::vector<Vector>& points) {
  if (points.empty()) throw std::invalid_argument("extremes_of: empty point set");
  Extremes e{points.front(), points.front()};
  for (const Vector& p : points) {
    e.lower = e.lower.cwiseMin(p);
    e.upper = e.upper.cwiseMax(p);
  }
  return e;
}

std::optional<double> spread_delta(const FrontApproximation& front, const Extremes& extremes) {
  const std::size_t n = front.points.size();
  if (n < 2) return std::nullopt;
  const int m = static_cast<int>(front.points.front().size());
  if (extremes.lower.size() != m || extremes.upper.size() != m) {
    throw std::invalid_argument("spread_delta: extremes dimension mismatch");
  }
  double worst = 0.0;
  for (int j = 0; j < m; ++j) {
    const auto c = sorted_coordinate(front.points, j);
    const double d0 = std::abs(c.front() - extremes.lower[j]);
    const double dn = std::abs(extremes.upper[j] - c.back());
    double mean = 0.0;
    for (std::size_t i = 1; i < n; ++i) mean += c[i] - c[i - 1];
    mean /= static_cast<double>(n - 1);
    double dev = 0.0;
    for (std::size_t i = 1; i < n; ++i) dev += std::abs((c[i] - c[i - 1]) - mean);
    const double num = d0 + dn + dev;
    const double den = d0 + dn + static_cast<double>(n - 1) * mean;
    const double dj = den > 0.0 ? num / den : 0.0;
    worst = std::max(worst, dj);
  }
  return worst;
}

PerformanceProfile performance_profile(const CostMatrix& costs) {
  PerformanceProfile out;
  const std::size_t ns = costs.size();
  out.curves.assign(ns, {});
  if (ns == 0) return out;
  const std::size_t np = costs.front().size();
  for (const auto& row : costs) {
    if (row.size() != np) throw std::invalid_argument("performance_profile: ragged cost matrix");
    for (const auto& c : row) {
      if (c && !(*c > 0.0)) throw std::invalid_argument("performance_profile: costs must be positive");
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> ratios(ns);
  for (std::size_t p = 0; p < np; ++p) {
    double best = inf;
    for (std::size_t s = 0; s < ns; ++s) {
      if (costs[s][p] && std::isfinite(*costs[s][p])) best = std::min(best, *costs[s][p]);
    }
    if (!std::isfinite(best)) {
      ++out.dropped_columns;
      continue;
    }
    ++out.problems_used;
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& c = costs[s][p];
      ratios[s].push_back(c && std::isfinite(*c) ? *c / best : inf);
    }
  }
  if (out.problems_used == 0) return out;

  const double total = static_cast<double>(out.problems_used);
  for (std::size_t s = 0; s < ns; ++s) {
    auto r = ratios[s];
    std::sort(r.begin(), r.end());
    std::vector<double> taus{1.0};
    for (double v : r) {
      if (std::isfinite(v)) taus.push_back(v);
    }
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    for (double tau : taus) {
      const auto count = std::upper_bound(r.begin(), r.end(), tau) - r.begin();
      out.curves[s].emplace_back(tau, static_cast<double>(count) / total);
    }
  }
  return out;
}

std::optional<double> purity_cost(std::optional<double> purity) {
  if (!purity || !(*purity > 0.0)) return std::nullopt;
  return 1.0 / *purity;
}

}  // namespace condg
