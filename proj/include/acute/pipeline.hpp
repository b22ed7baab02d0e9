#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "acute/beam_search.hpp"
#include "acute/learn.hpp"
#include "acute/mapping.hpp"
#include "acute/metrics.hpp"

namespace acute {

enum class CurriculumMode { AC, HC, Scratch };
std::string to_string(CurriculumMode mode);

struct AcuteSetup {
  TaskParams hf_target;
  AffineMap map;
  std::optional<NoiseModel> noise;
  ParamRanges lf_ranges;
  BeamConfig beam;
  StopCriterion stop_lf;
  StopCriterion stop_hf;
  LearnerConfig lf_learner;
  LearnerConfig hf_learner;

  // inverse(map, hf_target); throws ValidationError when the map does not
  // send it back onto hf_target exactly.
  TaskParams lf_target() const;
};

struct HfTaskRun {
  int task_index = 0;
  TaskParams hf_params;
  bool is_target = false;
  long start_offset = 0;  // total timesteps spent before this task
  LearnResult result;
};

struct TrialResult {
  CurriculumMode mode = CurriculumMode::Scratch;
  std::uint64_t seed = 0;
  std::optional<CurriculumResult> search;  // AC only
  std::vector<TaskParams> lf_curriculum;
  std::vector<TaskParams> hf_curriculum;
  long lf_sunk_timesteps = 0;
  std::vector<HfTaskRun> hf_tasks;
  Mlp final_policy;

  const HfTaskRun& target() const { return hf_tasks.back(); }
  LearningCurve target_curve() const;
  long total_timesteps() const;
};

// Validates an expert curriculum: every entry feasible in LF, last entry equal
// to the LF target. Throws ValidationError naming the entry and rule.
void validate_hc(const std::vector<TaskParams>& tasks, const TaskParams& lf_target);

// Reads {"tasks": [{"lf": {...}}, ...]} and validates it.
std::vector<TaskParams> load_hc(const std::filesystem::path& path, const TaskParams& lf_target);

// Maps source tasks through forward (or forward_noisy); the last task, the
// target, is always mapped exactly.
std::vector<TaskParams> map_curriculum(const std::vector<TaskParams>& lf_tasks,
                                       const AffineMap& map,
                                       const std::optional<NoiseModel>& noise, Rng& rng);

// Learns the HF tasks in order from a fresh policy, chaining each final policy
// into the next task. Source tasks are shaped, the target is not.
TrialResult run_hf_chain(const AcuteSetup& setup, CurriculumMode mode,
                         std::vector<TaskParams> lf_curriculum, long lf_sunk_timesteps,
                         std::uint64_t trial_seed);

// The full method for one trial: LF target by inverse mapping, curriculum by
// beam search (AC), expert list (HC) or none (scratch), then run_hf_chain.
TrialResult run_acute(const AcuteSetup& setup, CurriculumMode mode, std::uint64_t trial_seed,
                      const std::vector<TaskParams>* hc_tasks = nullptr, int jobs = 1);

// Optimizes the LF curriculum of one trial.
CurriculumResult optimize_curriculum(const AcuteSetup& setup, std::uint64_t trial_seed,
                                     int jobs = 1);

std::uint64_t trial_seed(std::uint64_t master_seed, int trial);

}  // namespace acute
