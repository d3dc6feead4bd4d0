#include "condg/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "condg/rng.hpp"

namespace condg {

void HolderParams::validate() const {
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("HolderParams: nu must lie in (0, 1]");
  if (!(m_nu > 0.0) || !std::isfinite(m_nu)) {
    throw std::invalid_argument("HolderParams: M_nu must be positive and finite");
  }
}

const std::vector<std::string>& benchmark_problem_names() {
  static const std::vector<std::string> names = {"BK1",  "IKK1",  "IM1",  "JOS1", "Lov1",
                                                 "MAN1", "MAN2",  "MAN3", "MGH33", "MHHM2",
                                                 "SP1",  "Toi8",  "VU1",  "VU2"};
  return names;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = [] {
    auto v = benchmark_problem_names();
    v.push_back("SHARED-MIN");
    return v;
  }();
  return names;
}

Vector evaluate_h(const ProblemInstance& p, const Vector& x) { return p.smooth.eval(x); }

Matrix evaluate_jacobian(const ProblemInstance& p, const Vector& x) {
  return p.smooth.jacobian(x);
}

double estimate_holder_constant(const ProblemInstance& p, double nu, int samples,
                                std::uint64_t seed) {
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("estimate_holder_constant: nu in (0,1]");
  if (samples < 1) throw std::invalid_argument("estimate_holder_constant: samples >= 1");
  Rng rng(seed);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector x = rng.uniform_in(p.box);
    const Vector y = rng.uniform_in(p.box);
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    const Matrix diff = p.smooth.jacobian(x) - p.smooth.jacobian(y);
    const double denom = std::pow(dist, nu);
    for (int i = 0; i < p.m(); ++i) best = std::max(best, diff.row(i).norm() / denom);
  }
  return kHolderSafetyFactor * best;
}

namespace {

double sq(double v) { return v * v; }

ProblemInstance make(std::string name, int n, int m, BoxBounds box, double m_nu, double lower,
                     std::function<Vector(const Vector&)> eval,
                     std::function<Matrix(const Vector&)> jac) {
  ProblemInstance p;
  p.name = std::move(name);
  p.smooth = SmoothObjective{n, m, std::move(eval), std::move(jac)};
  p.box = std::move(box);
  p.holder = HolderParams{1.0, m_nu, HolderProvenance::analytic};
  p.h_lower_bound = lower;
  return p;
}

BoxBounds box2(double l1, double l2, double u1, double u2) {
  return BoxBounds(Vector{{l1, l2}}, Vector{{u1, u2}});
}

ProblemInstance bk1() {
  return make(
      "BK1", 2, 2, box2(-5, -5, 10, 10), 2.0, 0.0,
      [](const Vector& x) {
        return Vector{{sq(x[0]) + sq(x[1]), sq(x[0] - 5) + sq(x[1] - 5)}};
      },
      [](const Vector& x) {
        Matrix j(2, 2);
        j << 2 * x[0], 2 * x[1], 2 * (x[0] - 5), 2 * (x[1] - 5);
        return j;
      });
}

ProblemInstance ikk1() {
  return make(
      "IKK1", 2, 3, box2(-50, -50, 50, 50), 2.0, 0.0,
      [](const Vector& x) { return Vector{{sq(x[0]), sq(x[0] - 20), sq(x[1])}}; },
      [](const Vector& x) {
        Matrix j(3, 2);
        j << 2 * x[0], 0, 2 * (x[0] - 20), 0, 0, 2 * x[1];
        return j;
      });
}

// f1 = 2 sqrt(x1) has |f1''| <= 1/2 on x1 >= 1; f2's Hessian has norm 1.
ProblemInstance im1() {
  return make(
      "IM1", 2, 2, box2(1, 1, 4, 2), 1.0, 1.0,
      [](const Vector& x) {
        return Vector{{2 * std::sqrt(x[0]), x[0] * (1 - x[1]) + 5}};
      },
      [](const Vector& x) {
        Matrix j(2, 2);
        j << 1 / std::sqrt(x[0]), 0, 1 - x[1], -x[0];
        return j;
      });
}

ProblemInstance jos1() {
  static constexpr int n = 10;
  return make(
      "JOS1", n, 2, BoxBounds::uniform(n, -100, 100), 2.0 / n, 0.0,
      [](const Vector& x) {
        return Vector{{x.squaredNorm() / n, (x.array() - 2).square().sum() / n}};
      },
      [](const Vector& x) {
        Matrix j(2, n);
        j.row(0) = 2 * x.transpose() / n;
        j.row(1) = 2 * (x.array() - 2).matrix().transpose() / n;
        return j;
      });
}

ProblemInstance lov1() {
  return make(
      "Lov1", 2, 2, box2(-10, -10, 10, 10), 2.1, 0.0,
      [](const Vector& x) {
        return Vector{{1.05 * sq(x[0]) + 0.98 * sq(x[1]),
                       0.99 * sq(x[0] - 3) + 1.03 * sq(x[1] - 2.5)}};
      },
      [](const Vector& x) {
        Matrix j(2, 2);
        j << 2.1 * x[0], 1.96 * x[1], 1.98 * (x[0] - 3), 2.06 * (x[1] - 2.5);
        return j;
      });
}

// h_i = (1/p) ||x - b_i||_p^p with Q_1 = Q_2 = I.
ProblemInstance man(std::string name, double p) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("MAN: p must lie in (1, 2]");
  const Vector b1{{-0.6, -0.6}};
  const Vector b2{{-0.5, -0.5}};
  auto phi = [p](double t) { return std::copysign(std::pow(std::abs(t), p - 1), t); };
  ProblemInstance inst = make(
      std::move(name), 2, 2, box2(-1, -1, 1, 1), 1.0, 0.0,
      [=](const Vector& x) {
        const Vector r1 = x - b1;
        const Vector r2 = x - b2;
        return Vector{{r1.array().abs().pow(p).sum() / p, r2.array().abs().pow(p).sum() / p}};
      },
      [=](const Vector& x) {
        Matrix j(2, 2);
        for (int c = 0; c < 2; ++c) {
          j(0, c) = phi(x[c] - b1[c]);
          j(1, c) = phi(x[c] - b2[c]);
        }
        return j;
      });
  if (p < 2.0) {
    const double nu = p - 1.0;
    inst.holder = HolderParams{
        nu, estimate_holder_constant(inst, nu, kHolderEstimateSamples, kHolderEstimateSeed),
        HolderProvenance::estimated};
  }
  return inst;
}

// f_i = (i * sum_j j x_j - 1)^2; Hessian 2 i^2 w w^T with ||w||^2 = 385.
ProblemInstance mgh33() {
  static constexpr int n = 10;
  Vector w(n);
  for (int j = 0; j < n; ++j) w[j] = j + 1;
  const double m_nu = 2.0 * n * n * w.squaredNorm();
  return make(
      "MGH33", n, n, BoxBounds::uniform(n, -1, 1), m_nu, 0.0,
      [w](const Vector& x) {
        const double s = w.dot(x);
        Vector f(n);
        for (int i = 0; i < n; ++i) f[i] = sq((i + 1) * s - 1);
        return f;
      },
      [w](const Vector& x) {
        const double s = w.dot(x);
        Matrix j(n, n);
        for (int i = 0; i < n; ++i) j.row(i) = 2 * ((i + 1) * s - 1) * (i + 1) * w.transpose();
        return j;
      });
}

ProblemInstance mhhm2() {
  const Matrix centers{{0.8, 0.6}, {0.85, 0.7}, {0.75, 0.85}};
  return make(
      "MHHM2", 2, 3, box2(0, 0, 1, 1), 2.0, 0.0,
      [centers](const Vector& x) {
        Vector f(3);
        for (int i = 0; i < 3; ++i) f[i] = (x - centers.row(i).transpose()).squaredNorm();
        return f;
      },
      [centers](const Vector& x) {
        Matrix j(3, 2);
        for (int i = 0; i < 3; ++i) j.row(i) = 2 * (x.transpose() - centers.row(i));
        return j;
      });
}

// Both Hessians have eigenvalues 3 +- sqrt(5).
ProblemInstance sp1() {
  return make(
      "SP1", 2, 2, box2(-100, -100, 100, 100), 3.0 + std::sqrt(5.0), 0.0,
      [](const Vector& x) {
        const double d = x[0] - x[1];
        return Vector{{sq(x[0] - 1) + sq(d), sq(x[1] - 3) + sq(d)}};
      },
      [](const Vector& x) {
        const double d = x[0] - x[1];
        Matrix j(2, 2);
        j << 2 * (x[0] - 1) + 2 * d, -2 * d, 2 * d, 2 * (x[1] - 3) - 2 * d;
        return j;
      });
}

ProblemInstance toi8() {
  return make(
      "Toi8", 3, 3, BoxBounds::uniform(3, -1, 1), 30.0, 0.0,
      [](const Vector& x) {
        return Vector{{sq(2 * x[0] - 1), 2 * sq(2 * x[0] - x[1]), 3 * sq(2 * x[1] - x[2])}};
      },
      [](const Vector& x) {
        Matrix j = Matrix::Zero(3, 3);
        j(0, 0) = 4 * (2 * x[0] - 1);
        const double r2 = 2 * x[0] - x[1];
        j(1, 0) = 2 * 2 * r2 * 2;
        j(1, 1) = -2 * 2 * r2;
        const double r3 = 2 * x[1] - x[2];
        j(2, 1) = 3 * 2 * r3 * 2;
        j(2, 2) = -3 * 2 * r3;
        return j;
      });
}

// f1 = 1/(1+r^2) has Hessian norm <= 2 (at r = 0); f2's Hessian is diag(2, 6).
ProblemInstance vu1() {
  return make(
      "VU1", 2, 2, box2(-3, -3, 3, 3), 6.0, 1.0 / 19.0,
      [](const Vector& x) {
        return Vector{{1 / (sq(x[0]) + sq(x[1]) + 1), sq(x[0]) + 3 * sq(x[1]) + 1}};
      },
      [](const Vector& x) {
        const double q = sq(x[0]) + sq(x[1]) + 1;
        Matrix j(2, 2);
        j << -2 * x[0] / (q * q), -2 * x[1] / (q * q), 2 * x[0], 6 * x[1];
        return j;
      });
}

ProblemInstance vu2() {
  return make(
      "VU2", 2, 2, box2(-3, -3, 3, 3), 2.0, -7.0,
      [](const Vector& x) { return Vector{{x[0] + x[1] + 1, sq(x[0]) + 2 * x[1] - 1}}; },
      [](const Vector& x) {
        Matrix j(2, 2);
        j << 1, 1, 2 * x[0], 2;
        return j;
      });
}

// h_i = a_i ||x||^2, a = (1, 2); common minimizer at the origin.
ProblemInstance shared_min() {
  return make(
      "SHARED-MIN", 2, 2, box2(-1, -1, 1, 1), 4.0, 0.0,
      [](const Vector& x) { return Vector{{x.squaredNorm(), 2 * x.squaredNorm()}}; },
      [](const Vector& x) {
        Matrix j(2, 2);
        j.row(0) = 2 * x.transpose();
        j.row(1) = 4 * x.transpose();
        return j;
      });
}

}  // namespace

ProblemInstance construct_problem(std::string_view name, std::optional<double> p) {
  if (name == "BK1") return bk1();
  if (name == "IKK1") return ikk1();
  if (name == "IM1") return im1();
  if (name == "JOS1") return jos1();
  if (name == "Lov1") return lov1();
  if (name == "MAN1") return man("MAN1", p.value_or(1.3));
  if (name == "MAN2") return man("MAN2", p.value_or(1.6));
  if (name == "MAN3") return man("MAN3", p.value_or(2.0));
  if (name == "MGH33") return mgh33();
  if (name == "MHHM2") return mhhm2();
  if (name == "SP1") return sp1();
  if (name == "Toi8") return toi8();
  if (name == "VU1") return vu1();
  if (name == "VU2") return vu2();
  if (name == "SHARED-MIN") return shared_min();
  throw std::invalid_argument("unknown problem: " + std::string(name));
}

}  // namespace condg
