#include <cmath>

#include "doctest.h"
#include "test_support.hpp"

using namespace condg;

TEST_CASE("registry and dimensions") {
  CHECK(benchmark_problem_names().size() == 14);
  CHECK(problem_names().size() == 15);
  const auto bk1 = construct_problem("BK1");
  CHECK(bk1.n() == 2);
  CHECK(bk1.m() == 2);
  CHECK(bk1.box.lower() == Vector::Constant(2, -5.0));
  CHECK(bk1.box.upper() == Vector::Constant(2, 10.0));
  const auto jos1 = construct_problem("JOS1");
  CHECK(jos1.n() == 10);
  CHECK(jos1.box.lower() == Vector::Constant(10, -100.0));
  const auto mgh = construct_problem("MGH33");
  CHECK(mgh.n() == 10);
  CHECK(mgh.m() == 10);
  const auto toi = construct_problem("Toi8");
  CHECK(toi.n() == 3);
  CHECK(toi.m() == 3);
  CHECK(construct_problem("MHHM2").m() == 3);
  CHECK(construct_problem("IKK1").m() == 3);
  CHECK_THROWS_AS(construct_problem("ZDT1"), std::invalid_argument);
}

TEST_CASE("objective values at reference points") {
  CHECK(evaluate_h(construct_problem("BK1"), Vector{{0.0, 0.0}}) == Vector{{0.0, 50.0}});
  CHECK(evaluate_h(construct_problem("BK1"), Vector{{5.0, 5.0}}) == Vector{{50.0, 0.0}});
  const Vector j = evaluate_h(construct_problem("JOS1"), Vector::Zero(10));
  CHECK(j[0] == doctest::Approx(0.0));
  CHECK(j[1] == doctest::Approx(4.0));
  CHECK(evaluate_h(construct_problem("IM1"), Vector{{1.0, 1.0}})[0] == doctest::Approx(2.0));
  CHECK(evaluate_h(construct_problem("MAN1"), Vector{{-0.6, -0.6}})[0] == doctest::Approx(0.0));

  const Matrix jac = evaluate_jacobian(construct_problem("BK1"), Vector{{0.0, 0.0}});
  CHECK(jac(0, 0) == 0.0);
  CHECK(jac(0, 1) == 0.0);
  CHECK(jac(1, 0) == -10.0);
  CHECK(jac(1, 1) == -10.0);
}

TEST_CASE("MAN3 is the Euclidean quadratic pair") {
  const auto p = construct_problem("MAN3");
  CHECK(p.holder.nu == 1.0);
  CHECK(p.holder.m_nu == 1.0);
  CHECK(p.holder.provenance == HolderProvenance::analytic);
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const Vector x = rng.uniform_in(p.box);
    const Vector h = evaluate_h(p, x);
    CHECK(h[0] == doctest::Approx(0.5 * (x - Vector{{-0.6, -0.6}}).squaredNorm()));
    CHECK(h[1] == doctest::Approx(0.5 * (x - Vector{{-0.5, -0.5}}).squaredNorm()));
  }
}

TEST_CASE("MAN exponents and estimated constants") {
  const auto man1 = construct_problem("MAN1");
  const auto man2 = construct_problem("MAN2");
  CHECK(man1.holder.nu == doctest::Approx(0.3));
  CHECK(man2.holder.nu == doctest::Approx(0.6));
  CHECK(man1.holder.provenance == HolderProvenance::estimated);
  // The estimate is deterministic.
  CHECK(construct_problem("MAN1").holder.m_nu == man1.holder.m_nu);
  CHECK_THROWS_AS(construct_problem("MAN1", 2.5), std::invalid_argument);
}

TEST_CASE("analytic Jacobians match central differences") {
  for (const auto& name : problem_names()) {
    const auto p = construct_problem(name);
    Rng rng{fnv1a(name), 99};
    for (int t = 0; t < 25; ++t) {
      // Stay off the kinks of |t|^{p-1} for the MAN family.
      Vector x = rng.uniform_in(p.box);
      if (name == "MAN1" || name == "MAN2") {
        bool near_kink = false;
        for (double b : {-0.6, -0.5}) {
          near_kink = near_kink || (x.array() - b).abs().minCoeff() < 1e-3;
        }
        if (near_kink) continue;
      }
      const Matrix analytic = evaluate_jacobian(p, x);
      const Matrix fd = testing::finite_difference_jacobian(p, x);
      CAPTURE(name);
      CAPTURE(t);
      CHECK(testing::relative_error(analytic, fd) <= 1e-5);
    }
  }
}

TEST_CASE("Hölder inequality holds on sampled pairs") {
  for (const auto& name : problem_names()) {
    const auto p = construct_problem(name);
    Rng rng{fnv1a(name), 2024};
    double worst = 0.0;
    for (int s = 0; s < 10000; ++s) {
      const Vector x = rng.uniform_in(p.box);
      const Vector y = rng.uniform_in(p.box);
      const double d = (x - y).norm();
      if (d == 0.0) continue;
      const Matrix diff = evaluate_jacobian(p, x) - evaluate_jacobian(p, y);
      for (int i = 0; i < p.m(); ++i) {
        worst = std::max(worst, diff.row(i).norm() - p.holder.m_nu * std::pow(d, p.holder.nu));
      }
    }
    CAPTURE(name);
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("objective lower bounds hold on the box") {
  for (const auto& name : problem_names()) {
    const auto p = construct_problem(name);
    Rng rng{fnv1a(name), 5};
    double lowest = kInf;
    for (int s = 0; s < 5000; ++s) lowest = std::min(lowest, evaluate_h(p, rng.uniform_in(p.box)).minCoeff());
    CAPTURE(name);
    CHECK(lowest >= p.h_lower_bound);
  }
}

TEST_CASE("Hölder parameter validation") {
  CHECK_THROWS_AS((HolderParams{0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((HolderParams{1.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((HolderParams{1.0, -1.0}.validate()), std::invalid_argument);
  CHECK_NOTHROW((HolderParams{0.5, 2.0}.validate()));
}
