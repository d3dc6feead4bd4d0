// Runs acceptance criteria 1-10 and prints one PASS/FAIL line per criterion.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "condg/experiment.hpp"
#include "condg/gap.hpp"
#include "condg/lp.hpp"
#include "condg/metrics.hpp"
#include "test_support.hpp"

using namespace condg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int worker_count() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ExperimentResults run_case(const std::vector<std::string>& problems, GCase gcase) {
  ExperimentConfig cfg;
  cfg.problems = problems;
  cfg.cases = {gcase};
  cfg.n_starts = 100;
  cfg.seed = 42;
  cfg.jobs = worker_count();
  return run_experiment(cfg);
}

const SummaryRow* find_row(const ExperimentResults& r, const std::string& problem, SolverKind k) {
  for (const auto& row : r.summary) {
    if (row.problem == problem && row.solver == k) return &row;
  }
  return nullptr;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Sum of violations of the named checks over a set of runs; replay failures
// count as violations.
long long violations(const std::vector<const RunRecord*>& runs,
                     const std::vector<std::string>& names, long long* checked = nullptr) {
  long long bad = 0;
  for (const RunRecord* r : runs) {
    for (const auto& name : names) {
      bad += r->theory.violations(name);
      if (checked) {
        if (auto it = r->theory.checks.find(name); it != r->theory.checks.end()) {
          *checked += it->second.checked;
        }
      }
    }
    for (const auto& note : r->theory.notes) {
      if (note.rfind("theory replay failed", 0) == 0) ++bad;
    }
  }
  return bad;
}

std::vector<const RunRecord*> all_runs(const std::vector<const ExperimentResults*>& sets) {
  std::vector<const RunRecord*> out;
  for (const auto* s : sets) {
    for (const auto& r : s->runs) out.push_back(&r);
  }
  return out;
}

Outcome criterion1(const ExperimentResults& r) {
  struct Expect {
    const char* problem;
    double pgm;
    double fgm;
  };
  const Expect expected[] = {{"BK1", 2, 2}, {"IM1", 3, 2}, {"MHHM2", 2, 2}, {"Lov1", 5, 4}};
  Outcome o{true, ""};
  for (const auto& e : expected) {
    const SummaryRow* p = find_row(r, e.problem, SolverKind::pgm);
    const SummaryRow* f = find_row(r, e.problem, SolverKind::fgm);
    if (!p || !f) return {false, std::string("missing row ") + e.problem};
    const bool ok = std::abs(p->median_iter - e.pgm) <= 1 && std::abs(f->median_iter - e.fgm) <= 1;
    o.pass = o.pass && ok;
    o.detail += std::string(e.problem) + " " + fmt(p->median_iter) + "/" + fmt(f->median_iter) +
                " (want " + fmt(e.pgm) + "/" + fmt(e.fgm) + ")" + (ok ? "" : " MISMATCH") + "; ";
  }
  return o;
}

Outcome criterion2(const ExperimentResults& r) {
  int wins = 0;
  int rows = 0;
  std::string losers;
  for (const auto& name : benchmark_problem_names()) {
    const SummaryRow* p = find_row(r, name, SolverKind::pgm);
    const SummaryRow* f = find_row(r, name, SolverKind::fgm);
    if (!p || !f) continue;
    ++rows;
    if (f->median_iter <= p->median_iter) {
      ++wins;
    } else {
      losers += " " + name + "(" + fmt(p->median_iter) + "/" + fmt(f->median_iter) + ")";
    }
  }
  return {rows == 14 && wins >= 10,
          "FGM <= PGM on " + std::to_string(wins) + " of " + std::to_string(rows) + " rows" +
              (losers.empty() ? "" : "; FGM slower on" + losers)};
}

Outcome criterion3(const std::vector<const RunRecord*>& runs, const ExperimentResults& c1) {
  long long pgm_fevals = 0;
  for (const RunRecord* r : runs) {
    if (r->solver == SolverKind::pgm) pgm_fevals += r->result.counters.feval;
  }
  const SummaryRow* bk1 = find_row(c1, "BK1", SolverKind::fgm);
  if (!bk1) return {false, "missing BK1 row"};
  return {pgm_fevals == 0 && std::abs(bk1->median_feval - 5.0) <= 1.0,
          "total PGM Feval " + std::to_string(pgm_fevals) + "; BK1 FGM median Feval " +
              fmt(bk1->median_feval) + " (want 5 +- 1)"};
}

Outcome criterion4(const std::vector<const RunRecord*>& runs) {
  long long checked = 0;
  const long long bad = violations(runs, {"monotonicity", "pgm_decrease"}, &checked);
  return {bad == 0 && checked > 0, std::to_string(checked) + " inequalities checked over " +
                                       std::to_string(runs.size()) + " runs, " +
                                       std::to_string(bad) + " violations"};
}

// Lipschitz constant of the inner max in u times the grid cell diagonal, plus
// the Hölder term.
double resolution_bound(const ProblemInstance& p, const Vector& x, int grid) {
  const double spacing = ((p.box.upper() - p.box.lower()) / (grid - 1)).norm();
  const Matrix jac = evaluate_jacobian(p, x);
  double lip = 0.0;
  for (int i = 0; i < p.m(); ++i) lip = std::max(lip, jac.row(i).norm());
  return spacing * (p.holder.m_nu * std::pow(p.box.diameter(), p.holder.nu) + lip);
}

Outcome criterion5() {
  const std::map<std::string, Vector> stationary{
      {"BK1", Vector{{0.0, 0.0}}},   {"IM1", Vector{{1.0, 1.5}}}, {"Lov1", Vector{{0.0, 0.0}}},
      {"SP1", Vector{{1.0, 1.0}}},   {"VU1", Vector{{0.0, 0.0}}}, {"VU2", Vector{{-3.0, -3.0}}}};
  constexpr int kGrid = 301;
  int points = 0;
  int bad = 0;
  double worst_ratio = 0.0;
  std::string detail;
  for (const auto& [name, xs] : stationary) {
    const auto p = construct_problem(name);
    const NonsmoothModel model = IndicatorModel{p.box};
    Rng rng{fnv1a(name), fnv1a("gap-oracle")};
    for (int t = 0; t < 20; ++t) {
      // Interior points: shrink the box by 1% on each side.
      Vector u(p.n());
      for (int j = 0; j < p.n(); ++j) u[j] = 0.01 + 0.98 * rng.uniform();
      const Vector x = p.box.from_unit(u);
      const double lp = solve_gap(p, model, x).theta;
      const double grid = brute_force_gap(p, model, x, kGrid).theta;
      const double bound = resolution_bound(p, x, kGrid);
      ++points;
      worst_ratio = std::max(worst_ratio, std::abs(lp - grid) / bound);
      if (lp > 0.0 || std::abs(lp - grid) > bound) ++bad;
    }
    const double at_stationary = solve_gap(p, model, xs).theta;
    if (at_stationary < -1e-7) {
      ++bad;
      detail += " " + name + " stationary theta " + fmt(at_stationary);
    }
  }
  return {bad == 0, std::to_string(points) + " points, worst |dtheta|/bound " + fmt(worst_ratio) +
                        ", " + std::to_string(bad) + " failures" + detail};
}

Outcome criterion6(const std::vector<const RunRecord*>& runs) {
  std::vector<const RunRecord*> fgm;
  for (const RunRecord* r : runs) {
    if (r->solver == SolverKind::fgm) fgm.push_back(r);
  }
  long long checked = 0;
  const long long bad =
      violations(fgm, {"fgm_acceptance", "fgm_inner_cap", "fgm_l_bound"}, &checked);
  return {bad == 0 && checked > 0, std::to_string(checked) + " line-search checks over " +
                                       std::to_string(fgm.size()) + " FGM runs, " +
                                       std::to_string(bad) + " violations"};
}

Outcome criterion7(const ExperimentResults& case_i, const ExperimentResults& shared) {
  std::vector<const RunRecord*> sel;
  for (const auto* set : {&case_i, &shared}) {
    for (const auto& r : set->runs) {
      if (r.problem == "BK1" || r.problem == "JOS1" || r.problem == "SHARED-MIN") sel.push_back(&r);
    }
  }
  long long checked = 0;
  const long long bad = violations(sel, {"rate_pgm", "rate_fgm"}, &checked);
  return {bad == 0 && checked > 0, std::to_string(checked) + " rate checks over " +
                                       std::to_string(sel.size()) + " runs, " +
                                       std::to_string(bad) + " violations"};
}

Outcome criterion8(const ExperimentResults& shared) {
  std::vector<const RunRecord*> runs;
  for (const auto& r : shared.runs) runs.push_back(&r);
  long long sandwich = 0;
  long long envelope = 0;
  const long long bad = violations(runs, {"convex_sandwich"}, &sandwich) +
                        violations(runs, {"convex_envelope"}, &envelope);
  int skipped = 0;
  for (const auto* r : runs) {
    if (!r->theory.checks.count("convex_sandwich")) ++skipped;
  }
  return {bad == 0 && skipped == 0 && sandwich > 0 && envelope > 0,
          std::to_string(sandwich) + " sandwich and " + std::to_string(envelope) +
              " envelope checks over " + std::to_string(runs.size()) + " runs, " +
              std::to_string(bad) + " violations, " + std::to_string(skipped) + " skipped"};
}

Outcome criterion9() {
  Rng rng(fnv1a("lp-equivalence"));
  int lp_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const LinearProgram lp = testing::random_small_lp(rng);
    const LpSolution a = solve_lp(lp);
    const LpSolution b = brute_force_lp(lp);
    if (a.status != b.status) {
      ++lp_bad;
    } else if (a.optimal() && std::abs(a.objective_value - b.objective_value) > 1e-8) {
      ++lp_bad;
    }
  }
  Rng prng(fnv1a("recurrence"));
  int rec_bad = 0;
  for (int t = 0; t < 100; ++t) {
    if (testing::recurrence_violations(testing::random_recurrence_params(prng), 500) > 0) ++rec_bad;
  }
  int jac_bad = 0;
  for (const auto& name : problem_names()) {
    const auto p = construct_problem(name);
    Rng jr{fnv1a(name), fnv1a("jacobian")};
    for (int t = 0; t < 20; ++t) {
      const Vector x = jr.uniform_in(p.box);
      if ((name == "MAN1" || name == "MAN2") &&
          std::min((x.array() + 0.6).abs().minCoeff(), (x.array() + 0.5).abs().minCoeff()) < 1e-3) {
        continue;  // gradient is not differentiable across the kink
      }
      if (testing::relative_error(evaluate_jacobian(p, x), testing::finite_difference_jacobian(p, x)) >
          1e-5) {
        ++jac_bad;
      }
    }
  }
  return {lp_bad == 0 && rec_bad == 0 && jac_bad == 0,
          "LP mismatches " + std::to_string(lp_bad) + "/100, recurrence failures " +
              std::to_string(rec_bad) + "/100, Jacobian failures " + std::to_string(jac_bad)};
}

Outcome criterion10(const ExperimentResults& r) {
  std::map<SolverKind, std::pair<int, int>> per_solver;
  for (const auto& run : r.runs) {
    auto& [conv, total] = per_solver[run.solver];
    ++total;
    if (run.result.status == RunStatus::converged) ++conv;
  }
  const int converged = r.count_status(RunStatus::converged);
  const int total = static_cast<int>(r.runs.size());
  const double rate = total ? static_cast<double>(converged) / total : 0.0;

  // Metric properties on the paired fronts.
  std::map<std::string, std::vector<FrontApproximation>> fronts;
  std::map<std::pair<std::string, SolverKind>, std::vector<Vector>> raw;
  for (const auto& run : r.runs) {
    if (run.result.status == RunStatus::converged) {
      raw[{run.problem, run.solver}].push_back(run.result.records.back().f_x);
    }
  }
  for (const auto& [key, pts] : raw) {
    fronts[key.first].push_back(
        FrontApproximation::from_points(std::string(to_string(key.second)), pts));
  }
  bool metrics_ok = true;
  for (const auto& [problem, fs] : fronts) {
    const auto ref = combined_reference(fs);
    const auto ref_front = FrontApproximation::from_points("reference", ref);
    metrics_ok = metrics_ok && purity(ref_front, ref) == 1.0;
    metrics_ok = metrics_ok && nondominated_filter(ref).size() == ref.size();
    for (const auto& f : fs) {
      metrics_ok = metrics_ok && nondominated_filter(f.points).size() == f.points.size();
    }
  }
  for (std::size_t i = 1; i < r.profiles.size(); ++i) {
    const auto& a = r.profiles[i - 1];
    for (std::size_t j = i; j < r.profiles.size(); ++j) {
      const auto& b = r.profiles[j];
      if (a.metric == b.metric && a.solver == b.solver && b.tau >= a.tau && b.rho < a.rho) {
        metrics_ok = false;
      }
    }
  }
  metrics_ok = metrics_ok && !r.profiles.empty() && !r.metrics.empty();

  std::string detail = std::to_string(converged) + "/" + std::to_string(total) + " converged (" +
                       fmt(100.0 * rate) + "%, need >= 95%)";
  for (const auto& [k, ct] : per_solver) {
    detail += "; " + std::string(to_string(k)) + " " + std::to_string(ct.first) + "/" +
              std::to_string(ct.second);
  }
  detail += std::string("; metric properties ") + (metrics_ok ? "hold" : "VIOLATED");
  return {rate >= 0.95 && metrics_ok, detail};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  using Check = std::function<Outcome()>;
  // Timing covers the setup since t0 plus the check itself.
  auto report = [&](int id, const char* title, const Check& check,
                    std::chrono::steady_clock::time_point t0, double limit) {
    const Outcome o = check();
    const double secs = seconds_since(t0);
    const bool pass = o.pass && secs < limit;
    if (!pass) ++failures;
    std::printf("criterion %2d %s: %s | %s | %.1fs (limit %.0fs)\n", id, pass ? "PASS" : "FAIL",
                title, o.detail.c_str(), secs, limit);
    std::fflush(stdout);
  };

  auto t0 = clock::now();
  const ExperimentResults c1 = run_case({"BK1", "IM1", "MHHM2", "Lov1"}, GCase::case_i);
  report(1, "benchmark medians", [&] { return criterion1(c1); }, t0, 120);

  t0 = clock::now();
  const ExperimentResults case_i = run_case(benchmark_problem_names(), GCase::case_i);
  report(2, "FGM vs PGM ordering", [&] { return criterion2(case_i); }, t0, 600);

  const auto c12 = all_runs({&c1, &case_i});
  t0 = clock::now();
  report(3, "Feval convention", [&] { return criterion3(c12, c1); }, t0, 60);

  t0 = clock::now();
  report(4, "descent properties", [&] { return criterion4(c12); }, t0, 60);

  t0 = clock::now();
  report(5, "gap oracle vs grid", [&] { return criterion5(); }, t0, 60);

  t0 = clock::now();
  report(6, "FGM line-search theory", [&] { return criterion6(c12); }, t0, 60);

  t0 = clock::now();
  const ExperimentResults shared = run_case({"SHARED-MIN"}, GCase::case_i);
  report(7, "rate envelopes", [&] { return criterion7(case_i, shared); }, t0, 600);

  t0 = clock::now();
  report(8, "convex rate checks", [&] { return criterion8(shared); }, t0, 60);

  t0 = clock::now();
  report(9, "oracle equivalences", [&] { return criterion9(); }, t0, 600);

  t0 = clock::now();
  const ExperimentResults case_ii = run_case({"BK1", "MAN1", "MAN3", "IM1"}, GCase::case_ii);
  report(10, "Case ii smoke and metrics", [&] { return criterion10(case_ii); }, t0, 600);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
