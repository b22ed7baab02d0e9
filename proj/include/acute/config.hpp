#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "acute/metrics.hpp"
#include "acute/pipeline.hpp"
#include "acute/serialization.hpp"

namespace acute {

struct ExperimentConfig {
  std::string label;  // method name in metrics and plots; defaults to the mode
  EnvVariant variant = EnvVariant::Plain;
  int fire_count = 1;
  CurriculumMode mode = CurriculumMode::AC;
  std::string hc_path;

  TaskParams hf_target;
  ParamVector map_scale{};
  ParamVector map_offset{};
  std::optional<ParamRanges> lf_ranges;  // default: ranges_below(LF target)
  bool noise = false;
  int noise_max_rejects = 1000;

  BeamConfig beam;
  StopCriterion stop_lf;
  StopCriterion stop_hf;
  LearnerConfig lf_learner;
  LearnerConfig hf_learner;

  int trials = 10;
  std::uint64_t seed = 0;
  std::string output_dir = "runs";

  int jumpstart_episodes = 100;
  Threshold threshold;

  // Throws ConfigError naming the path and violated rule.
  void validate() const;

  AcuteSetup setup() const;
  TaskParams lf_target() const;
};

// Defaults for the given variant: 10x10 grid target mapped to a 4 m arena,
// standard map, W=4, N=20, U=4, b=5000, REINFORCE in both fidelities.
ExperimentConfig default_config(EnvVariant variant = EnvVariant::Plain);

// Parses on top of default_config(variant). Unknown keys are rejected.
// Throws ConfigError with a path such as "config.beam.length_U".
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical form with every field explicit.
Json to_json(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical dump, without output_dir. 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace acute
