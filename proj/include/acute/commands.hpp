#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "acute/config.hpp"
#include "acute/serialization.hpp"

namespace acute {

Stamp stamp_of(const ExperimentConfig& cfg);

// Writes manifest.json (curriculum, costs, map, seeds) and lf_log.csv (one
// row per evaluated beam node) into `out`. Returns the manifest path.
std::filesystem::path cmd_optimize_lf(const ExperimentConfig& cfg, int jobs,
                                      const std::filesystem::path& out);

// Runs the HF chain of every trial and writes curve.csv, run.json and one
// policy checkpoint per trial. AC mode reads the curriculum from `manifest`,
// or optimizes it first when none is given. With `trajectory` set, one greedy
// rollout of trial 0's final policy is written to trajectory.json.
void cmd_run_hf(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& manifest,
                int jobs, const std::filesystem::path& out, bool trajectory);

// Compares every run directory against the baseline run directory. Writes
// metrics.csv (one row per trial and run), summary.csv and aggregate.csv.
void cmd_eval(const ExperimentConfig& cfg, const std::vector<std::filesystem::path>& runs,
              const std::filesystem::path& baseline, const std::filesystem::path& out);

// Renders learning_curves.svg from curve CSVs and, optionally, replay.svg
// from a trajectory JSON.
void cmd_plot(const ExperimentConfig& cfg, const std::vector<std::filesystem::path>& csvs,
              const std::optional<std::filesystem::path>& trajectory,
              const std::filesystem::path& out);

// Reads the manifest written by cmd_optimize_lf. Throws ValidationError when
// it does not cover cfg.trials trials or a curriculum does not end at the
// LF target.
std::vector<std::vector<TaskParams>> load_manifest(const std::filesystem::path& path,
                                                   const ExperimentConfig& cfg,
                                                   std::vector<long>* lf_sunk = nullptr);

// Entry point of the acute executable. Returns the process exit code:
// 0 success, 2 configuration or usage error, 3 runtime error.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace acute
