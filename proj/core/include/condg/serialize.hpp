#pragma once

// One JSON object per run (runs.jsonl). The schema carries everything needed
// to recompute summaries and metrics and to replay theory checks.

#include <filesystem>
#include <string>
#include <vector>

#include "condg/experiment.hpp"

namespace condg {

std::string run_to_json(const RunRecord& rec, const ExperimentConfig& cfg);

/// Throws std::runtime_error on malformed input.
RunRecord run_from_json(const std::string& line);

/// Throws IoError when the file cannot be read, std::runtime_error on a
/// malformed line (message includes the line number).
std::vector<RunRecord> read_runs_jsonl(const std::filesystem::path& path);

/// Config echo stored in a runs.jsonl line; used by `report` and `check`.
ExperimentConfig config_from_json(const std::string& line);

}  // namespace condg
