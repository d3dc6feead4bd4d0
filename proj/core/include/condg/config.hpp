#pragma once

// Flat "key = value" experiment configuration files.
//
//   # comment
//   problems = BK1, IM1        (or "all" for the benchmark rows)
//   cases = case_i, case_ii
//   solvers = pgm, fgm
//   n_starts = 100
//   seed = 42
//   epsilon = 1e-4
//   max_outer = 1000
//   l_init = 1
//   max_inner = 60
//   descent_slack = 1e-10
//   output_dir = results
//   fixed_model = false
//   jobs = 1

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

#include "condg/experiment.hpp"

namespace condg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ConfigError on unknown keys, duplicate keys, malformed values or a
/// configuration that fails ExperimentConfig::validate.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config file text reproducing cfg.
std::string format_config(const ExperimentConfig& cfg);

inline constexpr const char* kSeedEnvVar = "HOLDER_CONDG_SEED";

/// Parses a seed value (decimal unsigned 64-bit). Throws ConfigError.
std::uint64_t parse_seed(const std::string& text);

}  // namespace condg
