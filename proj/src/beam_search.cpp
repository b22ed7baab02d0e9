#include "acute/beam_search.hpp"

#include <algorithm>

#include "acute/errors.hpp"
#include "acute/grid_env.hpp"
#include "acute/parallel.hpp"

namespace acute {

namespace {

// Keys separating the agent-initialization stream from node streams.
constexpr std::uint64_t kAgentStream = 0xa9e47;

std::vector<GoalCategory> with_category(std::vector<GoalCategory> seen, GoalCategory c) {
  if (std::find(seen.begin(), seen.end(), c) == seen.end()) {
    seen.push_back(c);
    std::sort(seen.begin(), seen.end());
  }
  return seen;
}

struct PendingNode {
  TaskParams params;
  NodePtr parent;
  int slot = 0;
  int index = 0;
  Rng rng;
};

std::vector<NodePtr> evaluate(const CurriculumProblem& problem, std::vector<PendingNode> pending,
                              const Mlp* root_policy, bool is_target, int level,
                              long& creation_counter, int jobs) {
  std::vector<NodePtr> out(pending.size());
  const long base = creation_counter;
  creation_counter += static_cast<long>(pending.size());
  parallel_for(pending.size(), jobs, [&](std::size_t i) {
    PendingNode& p = pending[i];
    const Mlp& init = p.parent ? p.parent->policy : *root_policy;
    NodeOutcome r = problem.learn(p.params, init, is_target, p.rng);

    auto node = std::make_shared<BeamNode>();
    node->params = p.params;
    node->policy = std::move(r.policy);
    node->episodes_used = r.episodes;
    node->timesteps_used = r.timesteps;
    node->converged = r.converged;
    node->cumulative_episodes = r.episodes + (p.parent ? p.parent->cumulative_episodes : 0);
    node->cumulative_timesteps = r.timesteps + (p.parent ? p.parent->cumulative_timesteps : 0);
    node->goal_categories_seen =
        with_category(p.parent ? p.parent->goal_categories_seen : std::vector<GoalCategory>{},
                      category_of(p.params.goal));
    node->parent = p.parent;
    node->level = level;
    node->slot = p.slot;
    node->index = p.index;
    node->creation_index = base + static_cast<long>(i);
    out[i] = std::move(node);
  });
  return out;
}

void record(CurriculumResult& result, const std::vector<NodePtr>& all,
            const std::vector<NodePtr>& kept) {
  for (const auto& n : all) {
    const bool is_kept = std::find(kept.begin(), kept.end(), n) != kept.end();
    result.nodes.push_back(NodeRecord{n->level, n->slot, n->index, n->params, n->episodes_used,
                                      n->timesteps_used, n->converged, is_kept});
    result.sunk_episodes += n->episodes_used;
    result.sunk_timesteps += n->timesteps_used;
  }
}

}  // namespace

void BeamConfig::validate() const {
  if (width_W < 1) throw ValidationError("width_W must be >= 1");
  if (branch_N < 1) throw ValidationError("branch_N must be >= 1");
  if (length_U < static_cast<int>(goal_categories().size()))
    throw ValidationError("length_U must be >= the number of goal categories (" +
                          std::to_string(goal_categories().size()) + ")");
}

std::vector<TaskParams> path_of(const BeamNode& node) {
  std::vector<TaskParams> path;
  for (const BeamNode* n = &node; n != nullptr; n = n->parent.get()) path.push_back(n->params);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<NodePtr> best_candidates(std::vector<NodePtr> nodes, int width) {
  std::sort(nodes.begin(), nodes.end(), [](const NodePtr& a, const NodePtr& b) {
    if (a->episodes_used != b->episodes_used) return a->episodes_used < b->episodes_used;
    if (a->timesteps_used != b->timesteps_used) return a->timesteps_used < b->timesteps_used;
    if (a->params != b->params) return a->params < b->params;
    return a->creation_index < b->creation_index;
  });
  if (width >= 0 && nodes.size() > static_cast<std::size_t>(width))
    nodes.resize(static_cast<std::size_t>(width));
  return nodes;
}

std::vector<TaskParams> CurriculumResult::params() const {
  std::vector<TaskParams> out;
  for (const auto& t : tasks) out.push_back(t.params);
  return out;
}

CurriculumResult generate_ac(const CurriculumProblem& problem, const TaskParams& lf_target,
                             const BeamConfig& cfg, std::uint64_t seed, int jobs) {
  cfg.validate();
  if (!feasible(lf_target, Fidelity::Low))
    throw ValidationError("LF target is infeasible: " + to_string(lf_target));

  CurriculumResult result;
  long creation = 0;

  // Level 1: every root starts from the same initial agent.
  const Mlp root_policy = problem.init_agent(derive_seed(seed, {kAgentStream}));
  std::vector<PendingNode> pending;
  for (int n = 0; n < cfg.branch_N; ++n) {
    Rng rng = make_rng(seed, {1, 0, static_cast<std::uint64_t>(n)});
    TaskParams p = problem.init_source(rng, n);
    pending.push_back(PendingNode{std::move(p), nullptr, 0, n, std::move(rng)});
  }
  auto level_nodes = evaluate(problem, std::move(pending), &root_policy, false, 1, creation, jobs);
  auto kept = best_candidates(level_nodes, cfg.width_W);
  record(result, level_nodes, kept);

  // Intermediate levels.
  for (int u = 2; u < cfg.length_U; ++u) {
    pending.clear();
    for (std::size_t w = 0; w < kept.size(); ++w) {
      const auto path = path_of(*kept[w]);
      for (int n = 0; n < cfg.branch_N; ++n) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(u), w, static_cast<std::uint64_t>(n)});
        TaskParams p = problem.init_inter(path, rng, n);
        pending.push_back(PendingNode{std::move(p), kept[w], static_cast<int>(w), n, std::move(rng)});
      }
    }
    level_nodes = evaluate(problem, std::move(pending), nullptr, false, u, creation, jobs);
    kept = best_candidates(level_nodes, cfg.width_W);
    record(result, level_nodes, kept);
  }

  // Final level: the target task itself, warm-started from every kept node.
  pending.clear();
  for (std::size_t w = 0; w < kept.size(); ++w) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(cfg.length_U), w, 0});
    pending.push_back(PendingNode{lf_target, kept[w], static_cast<int>(w), 0, std::move(rng)});
  }
  auto leaves = evaluate(problem, std::move(pending), nullptr, true, cfg.length_U, creation, jobs);
  record(result, leaves, leaves);

  const auto best = *std::min_element(leaves.begin(), leaves.end(), [](const NodePtr& a, const NodePtr& b) {
    if (a->cumulative_episodes != b->cumulative_episodes)
      return a->cumulative_episodes < b->cumulative_episodes;
    if (a->cumulative_timesteps != b->cumulative_timesteps)
      return a->cumulative_timesteps < b->cumulative_timesteps;
    return a->creation_index < b->creation_index;
  });

  std::vector<const BeamNode*> chain;
  for (const BeamNode* n = best.get(); n != nullptr; n = n->parent.get()) chain.push_back(n);
  std::reverse(chain.begin(), chain.end());
  for (const BeamNode* n : chain)
    result.tasks.push_back(CurriculumTask{n->params, n->episodes_used, n->timesteps_used, n->converged});
  return result;
}

CraftingCurriculumProblem::CraftingCurriculumProblem(ParamRanges ranges, StopCriterion stop,
                                                     LearnerConfig learner)
    : ranges_(std::move(ranges)), stop_(stop), learner_(learner) {
  validate(ranges_);
  stop_.validate();
}

TaskParams CraftingCurriculumProblem::init_source(Rng& rng, int) const {
  std::vector<GoalCategory> options;
  for (GoalCategory c : ranges_.goals)
    if (category_achievable(ranges_, c)) options.push_back(c);
  if (options.empty()) throw NoFeasibleGoal("no goal category is achievable within the ranges");
  const auto pick = std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng);
  return random_task_for_category(rng, ranges_, options[pick]);
}

TaskParams CraftingCurriculumProblem::init_inter(std::span<const TaskParams> path, Rng& rng,
                                                 int) const {
  std::vector<GoalCategory> unseen;
  for (GoalCategory c : ranges_.goals) {
    const bool seen = std::any_of(path.begin(), path.end(),
                                  [&](const TaskParams& p) { return category_of(p.goal) == c; });
    if (!seen && category_achievable(ranges_, c)) unseen.push_back(c);
  }
  if (unseen.empty()) {
    // Every category covered: surplus levels revisit Break.
    if (!category_achievable(ranges_, GoalCategory::Break))
      throw NoFeasibleGoal("no unencountered goal and Break is not achievable");
    return random_task_for_category(rng, ranges_, GoalCategory::Break);
  }
  const auto pick = std::uniform_int_distribution<std::size_t>(0, unseen.size() - 1)(rng);
  return random_task_for_category(rng, ranges_, unseen[pick]);
}

Mlp CraftingCurriculumProblem::init_agent(std::uint64_t seed) const {
  return init_policy(observation_dim(GridEnv::kBeams), learner_, seed);
}

NodeOutcome CraftingCurriculumProblem::learn(const TaskParams& task, const Mlp& init,
                                             bool is_target, Rng& rng) const {
  GridEnv env;
  const RewardScheme scheme = is_target ? RewardScheme::target() : RewardScheme::source();
  LearnResult r = acute::learn(env, task, init, stop_, scheme, learner_, rng);
  return NodeOutcome{r.episodes_used, r.timesteps_used, r.converged, std::move(r.final_policy)};
}

}  // namespace acute
