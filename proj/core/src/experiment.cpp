#include "condg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "condg/rng.hpp"

namespace condg {

std::string_view to_string(GCase c) noexcept { return c == GCase::case_i ? "case_i" : "case_ii"; }

GCase parse_gcase(std::string_view s) {
  if (s == "case_i") return GCase::case_i;
  if (s == "case_ii") return GCase::case_ii;
  throw std::invalid_argument("unknown case: " + std::string(s));
}

void ExperimentConfig::validate() const {
  if (problems.empty()) throw std::invalid_argument("config: no problems selected");
  if (cases.empty()) throw std::invalid_argument("config: no cases selected");
  if (solvers.empty()) throw std::invalid_argument("config: no solvers selected");
  const auto& known = problem_names();
  for (const auto& p : problems) {
    if (std::find(known.begin(), known.end(), p) == known.end()) {
      throw std::invalid_argument("config: unknown problem " + p);
    }
  }
  if (n_starts < 1) throw std::invalid_argument("config: n_starts must be >= 1");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  solver_cfg.validate();
}

Vector start_point(std::uint64_t master_seed, const ProblemInstance& p, GCase gcase, int start) {
  Rng rng{master_seed, fnv1a(p.name), fnv1a(to_string(gcase)),
          static_cast<std::uint64_t>(start)};
  return rng.uniform_in(p.box);
}

std::uint64_t model_seed(std::uint64_t master_seed, std::string_view problem, int start) {
  return mix_seed(mix_seed(mix_seed(master_seed, fnv1a(problem)), fnv1a("support-model")),
                  static_cast<std::uint64_t>(start));
}

NonsmoothModel make_model(const ProblemInstance& p, GCase gcase, std::uint64_t master_seed,
                          int start, bool fixed_model) {
  if (gcase == GCase::case_i) return IndicatorModel{p.box};
  return sample_support_model(p.n(), p.m(), p.box,
                              model_seed(master_seed, p.name, fixed_model ? 0 : start));
}

std::optional<Vector> known_minimizer(std::string_view problem) {
  if (problem == "SHARED-MIN") return Vector::Zero(2);
  return std::nullopt;
}

NonsmoothModel record_model(const RunRecord& rec, const ProblemInstance& p) {
  if (rec.model) return *rec.model;
  return IndicatorModel{p.box};
}

TheoryReport theory_checks_for(const RunRecord& rec, const ProblemInstance& p) {
  const NonsmoothModel model = record_model(rec, p);
  TheoryReport rep = replay_run(rec.result, p, model);
  if (auto x_star = known_minimizer(rec.problem)) {
    rep.merge(convex_rate_check(rec.result, *x_star, p, model));
  }
  return rep;
}

int ExperimentResults::count_status(RunStatus s) const {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(),
                                        [s](const RunRecord& r) { return r.result.status == s; }));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

bool run_order(const RunRecord& a, const RunRecord& b) {
  return std::tie(a.problem, a.gcase, a.solver, a.start) <
         std::tie(b.problem, b.gcase, b.solver, b.start);
}

namespace {

using GroupKey = std::tuple<std::string, GCase, SolverKind>;

std::map<GroupKey, std::vector<const RunRecord*>> group_runs(const std::vector<RunRecord>& runs) {
  std::map<GroupKey, std::vector<const RunRecord*>> groups;
  for (const auto& r : runs) groups[{r.problem, r.gcase, r.solver}].push_back(&r);
  return groups;
}

// Floors keep zero-valued spreads usable as ratio-profile costs.
constexpr double kSpreadFloor = 1e-12;
constexpr double kCpuFloor = 1e-9;

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs) {
  std::vector<SummaryRow> out;
  for (const auto& [key, group] : group_runs(runs)) {
    SummaryRow row;
    std::tie(row.problem, row.gcase, row.solver) = key;
    std::vector<double> it, fe, cpu;
    for (const RunRecord* r : group) {
      it.push_back(r->result.counters.iter);
      fe.push_back(static_cast<double>(r->result.counters.feval));
      cpu.push_back(r->result.wall_time_s);
      if (r->result.status == RunStatus::max_iter_reached) ++row.n_failed;
      if (r->result.status == RunStatus::error) ++row.n_error;
    }
    row.median_iter = median(it);
    row.median_feval = median(fe);
    row.median_cpu_s = median(cpu);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<MetricRow> compute_metrics(const std::vector<RunRecord>& runs) {
  // Fronts per (problem, case), one per solver, from converged final values.
  std::map<std::pair<std::string, GCase>, std::map<SolverKind, std::vector<Vector>>> raw;
  for (const auto& r : runs) {
    auto& slot = raw[{r.problem, r.gcase}][r.solver];
    if (r.result.status == RunStatus::converged && !r.result.records.empty()) {
      slot.push_back(r.result.records.back().f_x);
    }
  }
  std::vector<MetricRow> out;
  for (const auto& [pc, per_solver] : raw) {
    std::vector<FrontApproximation> fronts;
    for (const auto& [solver, pts] : per_solver) {
      fronts.push_back(FrontApproximation::from_points(std::string(to_string(solver)), pts));
    }
    const auto reference = combined_reference(fronts);
    std::optional<Extremes> ext;
    if (!reference.empty()) ext = extremes_of(reference);
    std::size_t idx = 0;
    for (const auto& [solver, pts] : per_solver) {
      const FrontApproximation& f = fronts[idx++];
      MetricRow row;
      row.problem = pc.first;
      row.gcase = pc.second;
      row.solver = solver;
      row.report.n_points = static_cast<int>(f.points.size());
      row.report.purity = purity(f, reference);
      if (!f.points.empty()) row.report.gamma = spread_gamma(f);
      if (ext) row.report.delta = spread_delta(f, *ext);
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<ProfileRow> compute_profiles(const std::vector<MetricRow>& metrics,
                                         const std::vector<SummaryRow>& summary,
                                         std::vector<std::string>* warnings) {
  std::vector<ProfileRow> out;
  std::set<SolverKind> solver_set;
  std::set<GCase> case_set;
  for (const auto& m : metrics) {
    solver_set.insert(m.solver);
    case_set.insert(m.gcase);
  }
  for (const auto& s : summary) {
    solver_set.insert(s.solver);
    case_set.insert(s.gcase);
  }
  const std::vector<SolverKind> solvers(solver_set.begin(), solver_set.end());

  using CostFn = std::function<std::optional<double>(const MetricRow&)>;
  const std::vector<std::pair<std::string, CostFn>> metric_costs{
      {"purity", [](const MetricRow& m) { return purity_cost(m.report.purity); }},
      {"gamma",
       [](const MetricRow& m) -> std::optional<double> {
         // A single point has no gaps to measure.
         if (m.report.n_points < 2 || !m.report.gamma) return std::nullopt;
         return std::max(*m.report.gamma, kSpreadFloor);
       }},
      {"delta",
       [](const MetricRow& m) -> std::optional<double> {
         if (!m.report.delta) return std::nullopt;
         return std::max(*m.report.delta, kSpreadFloor);
       }},
  };

  auto emit = [&](const std::string& name, const CostMatrix& costs) {
    const PerformanceProfile prof = performance_profile(costs);
    if (warnings && prof.dropped_columns > 0) {
      warnings->push_back(name + ": " + std::to_string(prof.dropped_columns) +
                          " problem(s) without any finite cost dropped from the profile");
    }
    std::vector<ProfileRow> rows;
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      for (const auto& [tau, rho] : prof.curves[s]) rows.push_back({name, solvers[s], tau, rho});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ProfileRow& a, const ProfileRow& b) {
      return std::tie(a.tau, a.solver) < std::tie(b.tau, b.solver);
    });
    out.insert(out.end(), rows.begin(), rows.end());
  };

  for (GCase gc : case_set) {
    std::set<std::string> problems;
    for (const auto& m : metrics) {
      if (m.gcase == gc) problems.insert(m.problem);
    }
    const std::vector<std::string> plist(problems.begin(), problems.end());
    auto solver_index = [&](SolverKind k) {
      return static_cast<std::size_t>(std::find(solvers.begin(), solvers.end(), k) - solvers.begin());
    };
    auto problem_index = [&](const std::string& p) {
      return static_cast<std::size_t>(std::find(plist.begin(), plist.end(), p) - plist.begin());
    };
    for (const auto& [name, fn] : metric_costs) {
      CostMatrix costs(solvers.size(), std::vector<std::optional<double>>(plist.size()));
      for (const auto& m : metrics) {
        if (m.gcase != gc) continue;
        costs[solver_index(m.solver)][problem_index(m.problem)] = fn(m);
      }
      if (!plist.empty()) emit(name + "/" + std::string(to_string(gc)), costs);
    }

    std::set<std::string> sproblems;
    for (const auto& s : summary) {
      if (s.gcase == gc) sproblems.insert(s.problem);
    }
    const std::vector<std::string> slist(sproblems.begin(), sproblems.end());
    CostMatrix cpu(solvers.size(), std::vector<std::optional<double>>(slist.size()));
    for (const auto& s : summary) {
      if (s.gcase != gc) continue;
      const auto p = static_cast<std::size_t>(std::find(slist.begin(), slist.end(), s.problem) -
                                              slist.begin());
      cpu[solver_index(s.solver)][p] = std::max(s.median_cpu_s, kCpuFloor);
    }
    if (!slist.empty()) emit("cpu/" + std::string(to_string(gc)), cpu);
  }
  return out;
}

void aggregate(ExperimentResults& results) {
  results.summary = summarize(results.runs);
  results.metrics = compute_metrics(results.runs);
  results.profiles = compute_profiles(results.metrics, results.summary, &results.warnings);
}

ExperimentResults run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();

  struct Task {
    std::size_t problem_idx;
    GCase gcase;
    SolverKind solver;
    int start;
    std::size_t model_idx;
  };

  std::vector<ProblemInstance> problems;
  problems.reserve(cfg.problems.size());
  for (const auto& name : cfg.problems) problems.push_back(construct_problem(name));

  std::vector<NonsmoothModel> models;
  std::vector<Vector> starts;
  std::vector<Task> tasks;
  ExperimentResults results;
  for (std::size_t pi = 0; pi < problems.size(); ++pi) {
    const ProblemInstance& p = problems[pi];
    for (GCase gc : cfg.cases) {
      for (int s = 0; s < cfg.n_starts; ++s) {
        try {
          models.push_back(make_model(p, gc, cfg.seed, s, cfg.fixed_model));
        } catch (const std::exception& e) {
          results.warnings.push_back(p.name + " " + std::string(to_string(gc)) + " start " +
                                     std::to_string(s) + ": " + e.what());
          continue;
        }
        starts.push_back(start_point(cfg.seed, p, gc, s));
        for (SolverKind k : cfg.solvers) tasks.push_back({pi, gc, k, s, models.size() - 1});
      }
    }
  }

  results.runs.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      const ProblemInstance& p = problems[t.problem_idx];
      const NonsmoothModel& model = models[t.model_idx];
      RunRecord& rec = results.runs[i];
      rec.problem = p.name;
      rec.gcase = t.gcase;
      rec.solver = t.solver;
      rec.start = t.start;
      rec.x0 = starts[t.model_idx];
      if (const auto* sf = std::get_if<SupportFunctionModel>(&model)) rec.model = *sf;
      rec.result = run_solver(t.solver, p, model, rec.x0, cfg.solver_cfg);
      try {
        rec.theory = theory_checks_for(rec, p);
      } catch (const std::exception& e) {
        rec.theory.notes.push_back(std::string("theory replay failed: ") + e.what());
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(d, tasks.size());
      }
    }
  };

  const int nthreads = std::min<int>(cfg.jobs, static_cast<int>(std::max<std::size_t>(1, tasks.size())));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(results.runs.begin(), results.runs.end(), run_order);
  aggregate(results);
  return results;
}

}  // namespace condg
