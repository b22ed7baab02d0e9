#include "acute/pipeline.hpp"

#include <fstream>

#include <json.hpp>

#include "acute/errors.hpp"
#include "acute/planar_env.hpp"
#include "acute/serialization.hpp"

namespace acute {

namespace {

// Stream keys below a trial seed.
constexpr std::uint64_t kSearchStream = 1;
constexpr std::uint64_t kHfInitStream = 2;
constexpr std::uint64_t kHfTaskStream = 3;
constexpr std::uint64_t kNoiseStream = 4;

}  // namespace

std::string to_string(CurriculumMode mode) {
  switch (mode) {
    case CurriculumMode::AC: return "ac";
    case CurriculumMode::HC: return "hc";
    case CurriculumMode::Scratch: return "scratch";
  }
  return "?";
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial) {
  return derive_seed(master_seed, {static_cast<std::uint64_t>(trial)});
}

TaskParams AcuteSetup::lf_target() const {
  const TaskParams lf = inverse(map, hf_target);
  if (!anchors(map, lf, hf_target))
    throw ValidationError("mapping does not send the LF target {" + to_string(lf) +
                          "} onto the HF target {" + to_string(hf_target) + "}");
  return lf;
}

LearningCurve TrialResult::target_curve() const {
  const HfTaskRun& t = target();
  return LearningCurve::from_episodes(t.result.return_history, t.result.length_history,
                                      t.result.success_history, t.start_offset);
}

long TrialResult::total_timesteps() const {
  const HfTaskRun& t = target();
  return t.start_offset + t.result.timesteps_used;
}

void validate_hc(const std::vector<TaskParams>& tasks, const TaskParams& lf_target) {
  if (tasks.empty()) throw ValidationError("handcrafted curriculum is empty");
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!feasible(tasks[i], Fidelity::Low))
      throw ValidationError("handcrafted task " + std::to_string(i) + " {" + to_string(tasks[i]) +
                            "}: infeasible for its goal");
  if (tasks.back() != lf_target)
    throw ValidationError("handcrafted task " + std::to_string(tasks.size() - 1) +
                          ": last task must equal the LF target {" + to_string(lf_target) + "}");
}

std::vector<TaskParams> load_hc(const std::filesystem::path& path, const TaskParams& lf_target) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open handcrafted curriculum " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!doc.contains("tasks") || !doc["tasks"].is_array())
    throw ValidationError(path.string() + ": missing array 'tasks'");
  std::vector<TaskParams> tasks;
  for (std::size_t i = 0; i < doc["tasks"].size(); ++i) {
    const auto& entry = doc["tasks"][i];
    const auto& lf = entry.contains("lf") ? entry["lf"] : entry;
    try {
      tasks.push_back(task_params_from_json(lf, "tasks[" + std::to_string(i) + "]"));
    } catch (const SchemaError& e) {
      throw ValidationError(e.what());
    }
  }
  validate_hc(tasks, lf_target);
  return tasks;
}

std::vector<TaskParams> map_curriculum(const std::vector<TaskParams>& lf_tasks,
                                       const AffineMap& map,
                                       const std::optional<NoiseModel>& noise, Rng& rng) {
  std::vector<TaskParams> hf;
  for (std::size_t i = 0; i < lf_tasks.size(); ++i) {
    const bool is_target = i + 1 == lf_tasks.size();
    TaskParams p = (noise && !is_target) ? forward_noisy(map, *noise, lf_tasks[i], rng)
                                         : forward(map, lf_tasks[i]);
    if (!feasible(p, Fidelity::High))
      throw ValidationError("mapped HF task " + std::to_string(i) + " {" + to_string(p) +
                            "} is infeasible");
    hf.push_back(std::move(p));
  }
  return hf;
}

TrialResult run_hf_chain(const AcuteSetup& setup, CurriculumMode mode,
                         std::vector<TaskParams> lf_curriculum, long lf_sunk_timesteps,
                         std::uint64_t seed) {
  TrialResult trial;
  trial.mode = mode;
  trial.seed = seed;
  trial.lf_sunk_timesteps = lf_sunk_timesteps;
  Rng noise_rng = make_rng(seed, {kNoiseStream});
  trial.hf_curriculum = map_curriculum(lf_curriculum, setup.map, setup.noise, noise_rng);
  trial.lf_curriculum = std::move(lf_curriculum);

  // Only the task schema crosses fidelities; the HF policy starts fresh.
  Mlp policy = init_policy(observation_dim(PlanarEnv::kBeams), setup.hf_learner,
                           derive_seed(seed, {kHfInitStream}));
  long offset = lf_sunk_timesteps;
  PlanarEnv env;
  for (std::size_t u = 0; u < trial.hf_curriculum.size(); ++u) {
    const bool is_target = u + 1 == trial.hf_curriculum.size();
    Rng rng = make_rng(seed, {kHfTaskStream, u});
    HfTaskRun run;
    run.task_index = static_cast<int>(u);
    run.hf_params = trial.hf_curriculum[u];
    run.is_target = is_target;
    run.start_offset = offset;
    run.result = learn(env, run.hf_params, policy, setup.stop_hf,
                       is_target ? RewardScheme::target() : RewardScheme::source(),
                       setup.hf_learner, rng);
    offset += run.result.timesteps_used;
    policy = run.result.final_policy;
    trial.hf_tasks.push_back(std::move(run));
  }
  trial.final_policy = std::move(policy);
  return trial;
}

CurriculumResult optimize_curriculum(const AcuteSetup& setup, std::uint64_t seed, int jobs) {
  CraftingCurriculumProblem problem(setup.lf_ranges, setup.stop_lf, setup.lf_learner);
  return generate_ac(problem, setup.lf_target(), setup.beam, derive_seed(seed, {kSearchStream}),
                     jobs);
}

TrialResult run_acute(const AcuteSetup& setup, CurriculumMode mode, std::uint64_t seed,
                      const std::vector<TaskParams>* hc_tasks, int jobs) {
  const TaskParams lf_target = setup.lf_target();
  switch (mode) {
    case CurriculumMode::AC: {
      CurriculumResult search = optimize_curriculum(setup, seed, jobs);
      TrialResult t = run_hf_chain(setup, mode, search.params(), search.sunk_timesteps, seed);
      t.search = std::move(search);
      return t;
    }
    case CurriculumMode::HC: {
      if (hc_tasks == nullptr) throw ValidationError("HC mode needs a handcrafted curriculum");
      validate_hc(*hc_tasks, lf_target);
      return run_hf_chain(setup, mode, *hc_tasks, 0, seed);
    }
    case CurriculumMode::Scratch:
      return run_hf_chain(setup, mode, {lf_target}, 0, seed);
  }
  throw ValidationError("unknown curriculum mode");
}

}  // namespace acute
