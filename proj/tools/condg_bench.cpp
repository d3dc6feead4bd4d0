// condg_bench: run the benchmark protocol, recompute reports, replay checks.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error,
// 4 a run aborted with status error (or a replayed check failed).

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "condg/config.hpp"
#include "condg/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitRunError = 4;

void print_summary(const condg::ExperimentResults& res) {
  std::cout << std::left << std::setw(12) << "problem" << std::setw(9) << "case" << std::setw(5)
            << "" << std::right << std::setw(10) << "Iter" << std::setw(10) << "Feval"
            << std::setw(12) << "CPU(s)" << std::setw(8) << "Failed" << '\n';
  for (const auto& s : res.summary) {
    std::cout << std::left << std::setw(12) << s.problem << std::setw(9) << condg::to_string(s.gcase)
              << std::setw(5) << condg::to_string(s.solver) << std::right << std::setw(10)
              << s.median_iter << std::setw(10) << s.median_feval << std::setw(12)
              << std::setprecision(4) << s.median_cpu_s << std::setw(8) << s.n_failed
              << std::setprecision(6) << '\n';
  }
}

int report_errors(const condg::ExperimentResults& res) {
  int errors = 0;
  for (const auto& r : res.runs) {
    if (r.result.status != condg::RunStatus::error) continue;
    ++errors;
    std::cerr << "error: " << r.problem << ' ' << condg::to_string(r.gcase) << ' '
              << condg::to_string(r.solver) << " start " << r.start << ": " << r.result.message
              << '\n';
  }
  return errors;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  bool fixed_model = false;
  bool quiet = false;
};

int cmd_run(const RunArgs& args) {
  condg::ExperimentConfig cfg;
  try {
    cfg = condg::load_config(args.config);
    if (const char* env = std::getenv(condg::kSeedEnvVar); env && *env) {
      cfg.seed = condg::parse_seed(env);
    }
    if (args.seed) cfg.seed = *args.seed;
    if (args.out) cfg.output_dir = *args.out;
    if (args.jobs) cfg.jobs = *args.jobs;
    if (args.fixed_model) cfg.fixed_model = true;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  condg::ProgressFn progress;
  if (!args.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 50 == 0) std::cerr << "\r" << done << "/" << total << " runs" << std::flush;
      if (done == total) std::cerr << '\n';
    };
  }
  condg::ExperimentResults res;
  try {
    res = condg::run_experiment(cfg, progress);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';

  try {
    condg::emit_outputs(res, cfg, cfg.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  print_summary(res);
  std::cout << "wrote " << res.runs.size() << " runs to " << cfg.output_dir << '\n';
  return report_errors(res) > 0 ? kExitRunError : kExitOk;
}

int load_runs(const std::string& path, condg::ExperimentResults& res, condg::ExperimentConfig& cfg) {
  try {
    res.runs = condg::read_runs_jsonl(path);
    if (res.runs.empty()) {
      std::cerr << "error: " << path << " holds no runs\n";
      return kExitIo;
    }
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    cfg = condg::config_from_json(first);
  } catch (const condg::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  std::sort(res.runs.begin(), res.runs.end(), condg::run_order);
  return kExitOk;
}

int cmd_report(const std::string& runs_path, const std::optional<std::string>& out) {
  condg::ExperimentResults res;
  condg::ExperimentConfig cfg;
  if (int rc = load_runs(runs_path, res, cfg); rc != kExitOk) return rc;
  condg::aggregate(res);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  const std::filesystem::path dir =
      out ? std::filesystem::path(*out) : std::filesystem::path(runs_path).parent_path();
  try {
    condg::emit_outputs(res, cfg, dir.empty() ? "." : dir, /*write_runs=*/false);
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  print_summary(res);
  return kExitOk;
}

int cmd_check(const std::string& runs_path) {
  condg::ExperimentResults res;
  condg::ExperimentConfig cfg;
  if (int rc = load_runs(runs_path, res, cfg); rc != kExitOk) return rc;

  std::map<std::string, condg::ProblemInstance> problems;
  condg::TheoryReport total;
  std::size_t dirty_runs = 0;
  std::size_t mismatched = 0;
  for (const auto& r : res.runs) {
    auto it = problems.find(r.problem);
    if (it == problems.end()) it = problems.emplace(r.problem, condg::construct_problem(r.problem)).first;
    condg::TheoryReport rep;
    try {
      rep = condg::theory_checks_for(r, it->second);
    } catch (const std::exception& e) {
      std::cerr << "error: replay of " << r.problem << ' ' << condg::to_string(r.solver) << " start "
                << r.start << " failed: " << e.what() << '\n';
      ++dirty_runs;
      continue;
    }
    if (!rep.clean()) ++dirty_runs;
    if (rep.total_violations() != r.theory.total_violations()) ++mismatched;
    total.merge(rep);
  }

  std::cout << std::left << std::setw(20) << "check" << std::right << std::setw(12) << "checked"
            << std::setw(10) << "violated" << std::setw(16) << "worst excess" << '\n';
  for (const auto& [name, t] : total.checks) {
    std::cout << std::left << std::setw(20) << name << std::right << std::setw(12) << t.checked
              << std::setw(10) << t.violated << std::setw(16) << std::setprecision(3)
              << t.worst_excess << std::setprecision(6) << '\n';
  }
  std::cout << res.runs.size() << " runs replayed, " << dirty_runs << " with violations";
  if (mismatched > 0) std::cout << ", " << mismatched << " differ from the stored report";
  std::cout << '\n';
  return dirty_runs > 0 ? kExitRunError : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional gradient benchmark harness for multiobjective composite problems"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run the benchmark protocol from a config file");
  run->add_option("config", run_args.config, "Config file (key = value lines)")->required();
  run->add_option("--seed", run_args.seed, "Master seed (overrides config and environment)");
  run->add_option("--out", run_args.out, "Output directory (overrides output_dir)");
  run->add_option("--jobs", run_args.jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--fixed-model", run_args.fixed_model,
                "Share one Case ii instance across all starts of a problem");
  run->add_flag("-q,--quiet", run_args.quiet, "No progress output");

  std::string report_path;
  std::optional<std::string> report_out;
  auto* report = app.add_subcommand("report", "Recompute summary, metrics and profiles from runs.jsonl");
  report->add_option("runs", report_path, "Path to runs.jsonl")->required();
  report->add_option("--out", report_out, "Output directory (default: next to runs.jsonl)");

  std::string check_path;
  auto* check = app.add_subcommand("check", "Replay theory checks on stored runs");
  check->add_option("runs", check_path, "Path to runs.jsonl")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(run_args);
  if (*report) return cmd_report(report_path, report_out);
  if (*check) return cmd_check(check_path);
  return kExitConfig;
}
