#include <gtest/gtest.h>

#include "acute/beam_search.hpp"
#include "acute/errors.hpp"
#include "support/synthetic_curriculum.hpp"

namespace acute {
namespace {

NodePtr node(int episodes, long timesteps, int trees, long creation) {
  auto n = std::make_shared<BeamNode>();
  n->episodes_used = episodes;
  n->timesteps_used = timesteps;
  n->params.trees_env = trees;
  n->creation_index = creation;
  return n;
}

TEST(BestCandidates, TiesFollowTheTotalOrder) {
  const std::vector<NodePtr> nodes = {node(120, 5, 0, 0), node(80, 9, 0, 1), node(200, 1, 0, 2),
                                      node(80, 7, 0, 3)};
  const auto kept = best_candidates(nodes, 2);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0], nodes[3]);
  EXPECT_EQ(kept[1], nodes[1]);
}

TEST(BestCandidates, ParamsThenCreationBreakRemainingTies) {
  const std::vector<NodePtr> nodes = {node(80, 7, 2, 0), node(80, 7, 1, 1), node(80, 7, 1, 2)};
  const auto kept = best_candidates(nodes, 3);
  EXPECT_EQ(kept[0], nodes[1]);
  EXPECT_EQ(kept[1], nodes[2]);
  EXPECT_EQ(kept[2], nodes[0]);
}

TEST(BestCandidates, WideBeamKeepsEverythingSorted) {
  const std::vector<NodePtr> nodes = {node(3, 0, 0, 0), node(1, 0, 0, 1), node(2, 0, 0, 2)};
  const auto kept = best_candidates(nodes, 10);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[0]->episodes_used, 1);
  EXPECT_EQ(kept[2]->episodes_used, 3);
}

TEST(BeamConfig, LengthMustCoverTheCategories) {
  EXPECT_NO_THROW((BeamConfig{4, 20, 4}.validate()));
  EXPECT_THROW((BeamConfig{4, 20, 2}.validate()), ValidationError);
  EXPECT_THROW((BeamConfig{0, 20, 4}.validate()), ValidationError);
  EXPECT_THROW((BeamConfig{4, 0, 4}.validate()), ValidationError);
}

TEST(GenerateAc, ExhaustiveBeamFindsTheBruteForceOptimum) {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    Rng rng(100 + trial);
    const testing::SyntheticProblem problem(5, rng);
    // U = 4: three source levels, 5^3 = 125 curricula.
    const BeamConfig cfg{125, 5, 4};
    const auto r = generate_ac(problem, problem.target(), cfg, trial);
    ASSERT_EQ(r.tasks.size(), 4u);
    EXPECT_EQ(r.tasks.back().params, problem.target());
    EXPECT_EQ(testing::SyntheticProblem::curriculum_cost(r), problem.optimum(3));
    EXPECT_TRUE(testing::selection_invariant_holds(r, cfg.width_W, cfg.length_U));
  }
}

TEST(GenerateAc, NarrowBeamIsNeverBetterThanTheOptimum) {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    Rng rng(200 + trial);
    const testing::SyntheticProblem problem(5, rng);
    const BeamConfig cfg{1, 5, 4};
    const auto r = generate_ac(problem, problem.target(), cfg, trial);
    EXPECT_GE(testing::SyntheticProblem::curriculum_cost(r), problem.optimum(3));
    EXPECT_TRUE(testing::selection_invariant_holds(r, cfg.width_W, cfg.length_U));
  }
}

TEST(GenerateAc, SunkCostCountsEveryNode) {
  Rng rng(300);
  const testing::SyntheticProblem problem(4, rng);
  const BeamConfig cfg{2, 4, 4};
  const auto r = generate_ac(problem, problem.target(), cfg, 1);
  // 4 roots, 2x4 at each of two more levels, 2 target leaves.
  EXPECT_EQ(r.nodes.size(), 4u + 8u + 8u + 2u);
  long episodes = 0, steps = 0;
  for (const auto& n : r.nodes) {
    episodes += n.episodes;
    steps += n.timesteps;
  }
  EXPECT_EQ(r.sunk_episodes, episodes);
  EXPECT_EQ(r.sunk_timesteps, steps);
}

TEST(GenerateAc, ResultIsIndependentOfJobs) {
  Rng rng(400);
  const testing::SyntheticProblem problem(5, rng);
  const BeamConfig cfg{3, 5, 4};
  const auto a = generate_ac(problem, problem.target(), cfg, 9, 1);
  const auto b = generate_ac(problem, problem.target(), cfg, 9, 8);
  EXPECT_EQ(a.params(), b.params());
  EXPECT_EQ(a.sunk_timesteps, b.sunk_timesteps);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    EXPECT_EQ(a.nodes[i].params, b.nodes[i].params);
    EXPECT_EQ(a.nodes[i].kept, b.nodes[i].kept);
  }
}

TEST(CraftingProblem, RootsAndSuccessorsCoverNewCategories) {
  const ParamRanges ranges = default_lf_ranges(EnvVariant::Plain);
  const CraftingCurriculumProblem problem(ranges, StopCriterion{0.85, 10, 10}, LearnerConfig{});
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    std::vector<TaskParams> path = {problem.init_source(rng, 0)};
    path.push_back(problem.init_inter(path, rng, 0));
    path.push_back(problem.init_inter(path, rng, 0));
    std::vector<GoalCategory> seen;
    for (const auto& p : path) {
      EXPECT_TRUE(feasible(p));
      seen.push_back(category_of(p.goal));
    }
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::unique(seen.begin(), seen.end()), seen.end());
    // Every category seen: surplus levels fall back to Break.
    EXPECT_EQ(category_of(problem.init_inter(path, rng, 0).goal), GoalCategory::Break);
  }
}

TEST(CraftingProblem, SmallSearchEndsAtTheTarget) {
  TaskParams target = target_task_params(EnvVariant::Plain);
  target.width = target.height = 4;
  target.trees_env = 2;
  target.rocks_env = 1;
  const CraftingCurriculumProblem problem(ranges_below(target, EnvVariant::Plain),
                                          StopCriterion{0.85, 5, 10}, LearnerConfig{});
  const auto a = generate_ac(problem, target, BeamConfig{1, 2, 3}, 3, 1);
  const auto b = generate_ac(problem, target, BeamConfig{1, 2, 3}, 3, 4);
  ASSERT_EQ(a.tasks.size(), 3u);
  EXPECT_EQ(a.tasks.back().params, target);
  EXPECT_EQ(a.params(), b.params());
  EXPECT_EQ(a.sunk_timesteps, b.sunk_timesteps);
}

}  // namespace
}  // namespace acute
