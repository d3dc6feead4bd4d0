#pragma once

// Benchmark protocol: seeded random starts per (problem, case), every
// selected solver from every start, Case ii support-function instances shared
// across solvers, median statistics, front metrics and performance profiles.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "condg/metrics.hpp"
#include "condg/theory.hpp"

namespace condg {

enum class GCase { case_i, case_ii };

std::string_view to_string(GCase c) noexcept;
GCase parse_gcase(std::string_view s);

struct ExperimentConfig {
  std::vector<std::string> problems;
  std::vector<GCase> cases{GCase::case_i, GCase::case_ii};
  std::vector<SolverKind> solvers{SolverKind::pgm, SolverKind::fgm};
  int n_starts = 100;
  std::uint64_t seed = 42;
  SolverConfig solver_cfg;
  std::string output_dir = "results";
  /// Sample one Case ii instance per problem instead of one per start.
  bool fixed_model = false;
  int jobs = 1;

  /// Throws std::invalid_argument on empty lists, unknown problem names,
  /// n_starts < 1, jobs < 1 or an invalid solver configuration.
  void validate() const;
};

/// Starting point for (problem, case, start index); uniform in the box.
Vector start_point(std::uint64_t master_seed, const ProblemInstance& p, GCase gcase, int start);

/// Seed of the Case ii instance for (problem, start index).
std::uint64_t model_seed(std::uint64_t master_seed, std::string_view problem, int start);

NonsmoothModel make_model(const ProblemInstance& p, GCase gcase, std::uint64_t master_seed,
                          int start, bool fixed_model);

/// Reference point for the convex-case checks, when the problem has one.
std::optional<Vector> known_minimizer(std::string_view problem);

struct RunRecord {
  std::string problem;
  GCase gcase = GCase::case_i;
  SolverKind solver = SolverKind::pgm;
  int start = 0;
  Vector x0;
  RunResult result;
  /// Case ii instance (B_i, delta); absent for Case i.
  std::optional<SupportFunctionModel> model;
  TheoryReport theory;
};

/// Model a record was run against.
NonsmoothModel record_model(const RunRecord& rec, const ProblemInstance& p);

/// Replay checks plus convex checks where a minimizer is known.
TheoryReport theory_checks_for(const RunRecord& rec, const ProblemInstance& p);

struct SummaryRow {
  std::string problem;
  GCase gcase = GCase::case_i;
  SolverKind solver = SolverKind::pgm;
  double median_iter = 0.0;
  double median_feval = 0.0;
  double median_cpu_s = 0.0;
  int n_failed = 0;  ///< runs that reached the iteration cap
  int n_error = 0;   ///< runs aborted with status error
};

struct MetricRow {
  std::string problem;
  GCase gcase = GCase::case_i;
  SolverKind solver = SolverKind::pgm;
  MetricReport report;
};

struct ProfileRow {
  std::string metric;  ///< e.g. "purity/case_i"
  SolverKind solver = SolverKind::pgm;
  double tau = 1.0;
  double rho = 0.0;
};

struct ExperimentResults {
  std::vector<RunRecord> runs;
  std::vector<SummaryRow> summary;
  std::vector<MetricRow> metrics;
  std::vector<ProfileRow> profiles;
  std::vector<std::string> warnings;

  int count_status(RunStatus s) const;
};

/// Midpoint median; throws on empty input.
double median(std::vector<double> values);

/// Sort key (problem, case, solver, start).
bool run_order(const RunRecord& a, const RunRecord& b);

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs);
std::vector<MetricRow> compute_metrics(const std::vector<RunRecord>& runs);
std::vector<ProfileRow> compute_profiles(const std::vector<MetricRow>& metrics,
                                         const std::vector<SummaryRow>& summary,
                                         std::vector<std::string>* warnings = nullptr);

/// Fills summary, metrics and profiles from already sorted runs.
void aggregate(ExperimentResults& results);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs the whole protocol with cfg.jobs worker threads. Individual run
/// failures are recorded in the run, never thrown.
ExperimentResults run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes runs.jsonl (unless write_runs is false), summary.csv, metrics.csv
/// and profiles.csv into dir. Files are staged and renamed; on failure staged
/// files are removed and IoError is thrown.
void emit_outputs(const ExperimentResults& results, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir, bool write_runs = true);

}  // namespace condg
