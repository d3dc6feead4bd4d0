#include "condg/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace condg {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("invalid value for " + key + ": '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
}

}  // namespace

std::uint64_t parse_seed(const std::string& text) {
  return parse_number<std::uint64_t>(trim(text), "seed");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  cfg.problems = benchmark_problem_names();
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      if (key == "problems") {
        cfg.problems = value == "all" ? benchmark_problem_names() : split_list(value);
      } else if (key == "cases") {
        cfg.cases.clear();
        for (const auto& c : split_list(value)) cfg.cases.push_back(parse_gcase(c));
      } else if (key == "solvers") {
        cfg.solvers.clear();
        for (const auto& s : split_list(value)) cfg.solvers.push_back(parse_solver_kind(s));
      } else if (key == "n_starts") {
        cfg.n_starts = parse_number<int>(value, key);
      } else if (key == "seed") {
        cfg.seed = parse_seed(value);
      } else if (key == "epsilon") {
        cfg.solver_cfg.epsilon = parse_number<double>(value, key);
      } else if (key == "max_outer") {
        cfg.solver_cfg.max_outer = parse_number<int>(value, key);
      } else if (key == "l_init") {
        cfg.solver_cfg.l_init = parse_number<double>(value, key);
      } else if (key == "max_inner") {
        cfg.solver_cfg.max_inner = parse_number<int>(value, key);
      } else if (key == "descent_slack") {
        cfg.solver_cfg.descent_slack = parse_number<double>(value, key);
      } else if (key == "output_dir") {
        if (value.empty()) throw ConfigError("output_dir must not be empty");
        cfg.output_dir = value;
      } else if (key == "fixed_model") {
        cfg.fixed_model = parse_bool(value, key);
      } else if (key == "jobs") {
        cfg.jobs = parse_number<int>(value, key);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::string format_config(const ExperimentConfig& cfg) {
  auto join = [](const auto& items, auto&& conv) {
    std::string s;
    for (const auto& it : items) {
      if (!s.empty()) s += ", ";
      s += conv(it);
    }
    return s;
  };
  std::ostringstream os;
  os.precision(17);
  os << "problems = " << join(cfg.problems, [](const std::string& s) { return s; }) << '\n'
     << "cases = " << join(cfg.cases, [](GCase c) { return std::string(to_string(c)); }) << '\n'
     << "solvers = " << join(cfg.solvers, [](SolverKind k) { return std::string(to_string(k)); })
     << '\n'
     << "n_starts = " << cfg.n_starts << '\n'
     << "seed = " << cfg.seed << '\n'
     << "epsilon = " << cfg.solver_cfg.epsilon << '\n'
     << "max_outer = " << cfg.solver_cfg.max_outer << '\n'
     << "l_init = " << cfg.solver_cfg.l_init << '\n'
     << "max_inner = " << cfg.solver_cfg.max_inner << '\n'
     << "descent_slack = " << cfg.solver_cfg.descent_slack << '\n'
     << "output_dir = " << cfg.output_dir << '\n'
     << "fixed_model = " << (cfg.fixed_model ? "true" : "false") << '\n'
     << "jobs = " << cfg.jobs << '\n';
  return os.str();
}

}  // namespace condg
