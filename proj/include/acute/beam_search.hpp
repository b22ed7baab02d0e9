#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "acute/learn.hpp"
#include "acute/params.hpp"

namespace acute {

struct BeamConfig {
  int width_W = 4;
  int branch_N = 20;
  int length_U = 4;

  // Throws ValidationError; length_U must cover every goal category.
  void validate() const;
};

struct BeamNode {
  TaskParams params;
  Mlp policy;
  int episodes_used = 0;
  long timesteps_used = 0;
  bool converged = false;
  int cumulative_episodes = 0;
  long cumulative_timesteps = 0;
  std::vector<GoalCategory> goal_categories_seen;  // sorted, unique
  std::shared_ptr<const BeamNode> parent;
  int level = 1;  // 1-based
  int slot = 0;   // beam slot of the parent (0 at level 1)
  int index = 0;  // branch index
  long creation_index = 0;
};

using NodePtr = std::shared_ptr<const BeamNode>;

// Root-to-node parameter path.
std::vector<TaskParams> path_of(const BeamNode& node);

// Ascending by (episodes, timesteps, params, creation index); keeps the first
// min(width, |nodes|).
std::vector<NodePtr> best_candidates(std::vector<NodePtr> nodes, int width);

struct NodeOutcome {
  int episodes = 0;
  long timesteps = 0;
  bool converged = false;
  Mlp policy;
};

// The task domain searched over. learn() is called concurrently from several
// threads and must only touch its arguments.
class CurriculumProblem {
 public:
  virtual ~CurriculumProblem() = default;
  virtual TaskParams init_source(Rng& rng, int index) const = 0;
  // Successor of `path` with a goal category the path has not covered yet.
  virtual TaskParams init_inter(std::span<const TaskParams> path, Rng& rng, int index) const = 0;
  virtual Mlp init_agent(std::uint64_t seed) const = 0;
  virtual NodeOutcome learn(const TaskParams& task, const Mlp& init, bool is_target,
                            Rng& rng) const = 0;
};

struct CurriculumTask {
  TaskParams params;
  int episodes = 0;
  long timesteps = 0;
  bool converged = false;
};

struct NodeRecord {
  int level = 0;
  int slot = 0;
  int index = 0;
  TaskParams params;
  int episodes = 0;
  long timesteps = 0;
  bool converged = false;
  bool kept = false;
};

struct CurriculumResult {
  std::vector<CurriculumTask> tasks;  // length U, last is the target
  long sunk_episodes = 0;             // every node evaluated during search
  long sunk_timesteps = 0;
  std::vector<NodeRecord> nodes;

  std::vector<TaskParams> params() const;
};

// Beam search over curricula ending at lf_target. Node rng streams are keyed
// by (seed, level, slot, index) so the result is independent of `jobs`.
CurriculumResult generate_ac(const CurriculumProblem& problem, const TaskParams& lf_target,
                             const BeamConfig& cfg, std::uint64_t seed, int jobs = 1);

// Low-fidelity crafting domain learned by the configured learner.
class CraftingCurriculumProblem final : public CurriculumProblem {
 public:
  CraftingCurriculumProblem(ParamRanges ranges, StopCriterion stop, LearnerConfig learner);

  TaskParams init_source(Rng& rng, int index) const override;
  TaskParams init_inter(std::span<const TaskParams> path, Rng& rng, int index) const override;
  Mlp init_agent(std::uint64_t seed) const override;
  NodeOutcome learn(const TaskParams& task, const Mlp& init, bool is_target,
                    Rng& rng) const override;

 private:
  ParamRanges ranges_;
  StopCriterion stop_;
  LearnerConfig learner_;
};

}  // namespace acute
