#include "condg/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace condg {
namespace {

using nlohmann::json;

json to_json_vec(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vec_from_json(const json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

json to_json_mat(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json_vec(m.row(r).transpose()));
  return rows;
}

Matrix mat_from_json(const json& rows) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = nr == 0 ? 0 : static_cast<Eigen::Index>(rows[0].size());
  Matrix m(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r) m.row(r) = vec_from_json(rows[r]).transpose();
  return m;
}

json solver_cfg_json(const SolverConfig& c) {
  return {{"epsilon", c.epsilon},     {"max_outer", c.max_outer},
          {"l_init", c.l_init},       {"max_inner", c.max_inner},
          {"descent_slack", c.descent_slack}};
}

SolverConfig solver_cfg_from_json(const json& j) {
  SolverConfig c;
  c.epsilon = j.at("epsilon").get<double>();
  c.max_outer = j.at("max_outer").get<int>();
  c.l_init = j.at("l_init").get<double>();
  c.max_inner = j.at("max_inner").get<int>();
  c.descent_slack = j.at("descent_slack").get<double>();
  return c;
}

json theory_json(const TheoryReport& t) {
  json checks = json::object();
  for (const auto& [name, tally] : t.checks) {
    checks[name] = {{"checked", tally.checked},
                    {"violated", tally.violated},
                    {"worst_excess", tally.worst_excess},
                    {"first_violation_k", tally.first_violation_k}};
  }
  json out = {{"checks", checks}, {"notes", t.notes}, {"clean", t.clean()}};
  out["k_tilde0"] = t.k_tilde0 ? json(*t.k_tilde0) : json(nullptr);
  return out;
}

TheoryReport theory_from_json(const json& j) {
  TheoryReport t;
  for (const auto& [name, v] : j.at("checks").items()) {
    CheckTally tally;
    tally.checked = v.at("checked").get<long long>();
    tally.violated = v.at("violated").get<long long>();
    tally.worst_excess = v.at("worst_excess").get<double>();
    tally.first_violation_k = v.at("first_violation_k").get<int>();
    t.checks[name] = tally;
  }
  t.notes = j.at("notes").get<std::vector<std::string>>();
  if (!j.at("k_tilde0").is_null()) t.k_tilde0 = j.at("k_tilde0").get<int>();
  return t;
}

json config_json(const ExperimentConfig& cfg) {
  json cases = json::array();
  for (GCase c : cfg.cases) cases.push_back(std::string(to_string(c)));
  json solvers = json::array();
  for (SolverKind k : cfg.solvers) solvers.push_back(std::string(to_string(k)));
  return {{"problems", cfg.problems},
          {"cases", cases},
          {"solvers", solvers},
          {"n_starts", cfg.n_starts},
          {"seed", cfg.seed},
          {"solver", solver_cfg_json(cfg.solver_cfg)},
          {"fixed_model", cfg.fixed_model}};
}

// Non-finite numbers are not valid JSON; store them as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

std::string run_to_json(const RunRecord& rec, const ExperimentConfig& cfg) {
  const RunResult& r = rec.result;
  json iters = json::array();
  for (const auto& it : r.records) {
    json f = json::array();
    for (Eigen::Index i = 0; i < it.f_x.size(); ++i) f.push_back(num(it.f_x[i]));
    json row = {{"k", it.k},
                {"theta", it.theta},
                {"s_minus_x_norm", it.s_minus_x_norm},
                {"x", to_json_vec(it.x)},
                {"f", f},
                {"fevals_so_far", it.fevals_so_far}};
    row["step"] = it.step ? json(*it.step) : json(nullptr);
    row["l"] = it.l_k ? json(*it.l_k) : json(nullptr);
    row["trials"] = it.inner_trials;
    iters.push_back(std::move(row));
  }
  json j = {{"problem", rec.problem},
            {"case", std::string(to_string(rec.gcase))},
            {"solver", std::string(to_string(rec.solver))},
            {"start", rec.start},
            {"config", config_json(cfg)},
            {"x0", to_json_vec(rec.x0)},
            {"status", std::string(to_string(r.status))},
            {"message", r.message},
            {"counters",
             {{"iter", r.counters.iter},
              {"feval", r.counters.feval},
              {"jeval", r.counters.jeval},
              {"lp_solves", r.counters.lp_solves}}},
            {"cpu_s", r.wall_time_s},
            {"iterations", iters},
            {"theory", theory_json(rec.theory)}};
  json fin = {{"x", to_json_vec(r.final_x)}, {"theta", r.final_theta()}};
  if (!r.records.empty()) {
    json f = json::array();
    for (Eigen::Index i = 0; i < r.records.back().f_x.size(); ++i) f.push_back(num(r.records.back().f_x[i]));
    fin["f"] = f;
  } else {
    fin["f"] = nullptr;
  }
  j["final"] = fin;
  if (rec.model) {
    json bs = json::array();
    for (int i = 0; i < rec.model->num_objectives(); ++i) bs.push_back(to_json_mat(rec.model->b(i)));
    j["model"] = {{"B", bs}, {"delta", rec.model->delta()}};
  } else {
    j["model"] = nullptr;
  }
  return j.dump();
}

RunRecord run_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid JSON: ") + e.what());
  }
  try {
    RunRecord rec;
    rec.problem = j.at("problem").get<std::string>();
    rec.gcase = parse_gcase(j.at("case").get<std::string>());
    rec.solver = parse_solver_kind(j.at("solver").get<std::string>());
    rec.start = j.at("start").get<int>();
    rec.x0 = vec_from_json(j.at("x0"));
    RunResult& r = rec.result;
    r.solver = rec.solver;
    r.status = parse_run_status(j.at("status").get<std::string>());
    r.message = j.at("message").get<std::string>();
    const json& c = j.at("counters");
    r.counters.iter = c.at("iter").get<int>();
    r.counters.feval = c.at("feval").get<long long>();
    r.counters.jeval = c.at("jeval").get<long long>();
    r.counters.lp_solves = c.at("lp_solves").get<long long>();
    r.wall_time_s = j.at("cpu_s").get<double>();
    r.config = solver_cfg_from_json(j.at("config").at("solver"));
    for (const auto& it : j.at("iterations")) {
      IterationRecord ir;
      ir.k = it.at("k").get<int>();
      ir.theta = it.at("theta").get<double>();
      ir.s_minus_x_norm = it.at("s_minus_x_norm").get<double>();
      ir.x = vec_from_json(it.at("x"));
      const json& f = it.at("f");
      ir.f_x.resize(static_cast<Eigen::Index>(f.size()));
      for (std::size_t i = 0; i < f.size(); ++i) ir.f_x[static_cast<Eigen::Index>(i)] = num_from(f[i]);
      ir.fevals_so_far = it.at("fevals_so_far").get<long long>();
      if (!it.at("step").is_null()) ir.step = it.at("step").get<double>();
      if (!it.at("l").is_null()) ir.l_k = it.at("l").get<double>();
      ir.inner_trials = it.at("trials").get<int>();
      r.records.push_back(std::move(ir));
    }
    r.final_x = vec_from_json(j.at("final").at("x"));
    rec.theory = theory_from_json(j.at("theory"));
    if (!j.at("model").is_null()) {
      std::vector<Matrix> bs;
      for (const auto& b : j.at("model").at("B")) bs.push_back(mat_from_json(b));
      const ProblemInstance p = construct_problem(rec.problem);
      rec.model.emplace(std::move(bs), j.at("model").at("delta").get<double>(), p.box);
    }
    return rec;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed run record: ") + e.what());
  }
}

ExperimentConfig config_from_json(const std::string& line) {
  try {
    const json j = json::parse(line).at("config");
    ExperimentConfig cfg;
    cfg.problems = j.at("problems").get<std::vector<std::string>>();
    cfg.cases.clear();
    for (const auto& c : j.at("cases")) cfg.cases.push_back(parse_gcase(c.get<std::string>()));
    cfg.solvers.clear();
    for (const auto& s : j.at("solvers")) cfg.solvers.push_back(parse_solver_kind(s.get<std::string>()));
    cfg.n_starts = j.at("n_starts").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.solver_cfg = solver_cfg_from_json(j.at("solver"));
    cfg.fixed_model = j.at("fixed_model").get<bool>();
    return cfg;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed config echo: ") + e.what());
  }
}

std::vector<RunRecord> read_runs_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<RunRecord> runs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      runs.push_back(run_from_json(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("read error on " + path.string());
  return runs;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

class StagedFiles {
 public:
  explicit StagedFiles(std::filesystem::path dir) : dir_(std::move(dir)) {}
  ~StagedFiles() {
    std::error_code ec;
    for (const auto& p : staged_) std::filesystem::remove(p, ec);
  }

  std::ofstream open(const std::string& name) {
    const auto tmp = dir_ / (name + ".tmp");
    staged_.push_back(tmp);
    names_.push_back(name);
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    return out;
  }

  static void close(std::ofstream& out, const std::string& what) {
    out.close();
    if (out.fail()) throw IoError("write failed for " + what);
  }

  void commit() {
    for (std::size_t i = 0; i < staged_.size(); ++i) {
      std::error_code ec;
      std::filesystem::rename(staged_[i], dir_ / names_[i], ec);
      if (ec) throw IoError("cannot finalize " + names_[i] + ": " + ec.message());
    }
    staged_.clear();
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> staged_;
  std::vector<std::string> names_;
};

}  // namespace

void emit_outputs(const ExperimentResults& results, const ExperimentConfig& cfg,
                  const std::filesystem::path& dir, bool write_runs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  StagedFiles files(dir);
  try {
    if (write_runs) {
      auto out = files.open("runs.jsonl");
      for (const auto& r : results.runs) out << run_to_json(r, cfg) << '\n';
      StagedFiles::close(out, "runs.jsonl");
    }
    {
      auto out = files.open("summary.csv");
      out << "problem,case,solver,median_iter,median_feval,median_cpu_s,n_failed\n";
      for (const auto& s : results.summary) {
        out << s.problem << ',' << to_string(s.gcase) << ',' << to_string(s.solver) << ','
            << fmt(s.median_iter) << ',' << fmt(s.median_feval) << ',' << fmt(s.median_cpu_s)
            << ',' << s.n_failed << '\n';
      }
      StagedFiles::close(out, "summary.csv");
    }
    {
      auto out = files.open("metrics.csv");
      out << "problem,case,solver,n_points,purity,gamma,delta\n";
      for (const auto& m : results.metrics) {
        out << m.problem << ',' << to_string(m.gcase) << ',' << to_string(m.solver) << ','
            << m.report.n_points << ',' << fmt(m.report.purity) << ',' << fmt_opt(m.report.gamma)
            << ',' << fmt_opt(m.report.delta) << '\n';
      }
      StagedFiles::close(out, "metrics.csv");
    }
    {
      auto out = files.open("profiles.csv");
      out << "metric,solver,tau,rho\n";
      for (const auto& p : results.profiles) {
        out << p.metric << ',' << to_string(p.solver) << ',' << fmt(p.tau) << ',' << fmt(p.rho)
            << '\n';
      }
      StagedFiles::close(out, "profiles.csv");
    }
    files.commit();
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(std::string("serialization failed: ") + e.what());
  }
}

}  // namespace condg
