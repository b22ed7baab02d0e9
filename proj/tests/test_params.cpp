#include <gtest/gtest.h>

#include "acute/errors.hpp"
#include "acute/params.hpp"

namespace acute {
namespace {

TaskParams make(double w, double h, int trees, int rocks, int tables, int wood, int stone,
                GoalSpec goal, int fires = 0) {
  TaskParams p;
  p.width = w;
  p.height = h;
  p.trees_env = trees;
  p.rocks_env = rocks;
  p.crafting_tables = tables;
  p.wood_inv = wood;
  p.stone_inv = stone;
  p.fires_env = fires;
  p.goal = goal;
  return p;
}

TEST(Feasible, TargetTaskIsFeasible) {
  EXPECT_TRUE(feasible(make(10, 10, 4, 2, 1, 0, 0, CraftGoal{})));
}

TEST(Feasible, CraftWithoutWoodSourceIsInfeasible) {
  EXPECT_FALSE(feasible(make(10, 10, 0, 0, 1, 0, 0, CraftGoal{})));
}

TEST(Feasible, InventoryCountsTowardTheRecipe) {
  // 1 tree + 1 wood >= 2 wood, 1 rock + 0 stone >= 1 stone.
  EXPECT_TRUE(feasible(make(5, 5, 1, 1, 1, 1, 0, CraftGoal{})));
  EXPECT_FALSE(feasible(make(5, 5, 0, 1, 1, 1, 0, CraftGoal{})));
  EXPECT_FALSE(feasible(make(5, 5, 1, 0, 1, 1, 0, CraftGoal{})));
  EXPECT_FALSE(feasible(make(5, 5, 2, 1, 0, 0, 0, CraftGoal{})));
}

TEST(Feasible, BreakNeedsTheRequestedItems) {
  EXPECT_TRUE(feasible(make(5, 5, 2, 1, 0, 0, 0, BreakGoal{2, 1})));
  EXPECT_FALSE(feasible(make(5, 5, 1, 1, 0, 0, 0, BreakGoal{2, 1})));
  EXPECT_FALSE(feasible(make(5, 5, 2, 1, 0, 0, 0, BreakGoal{0, 0})));
}

TEST(Feasible, NavigateNeedsTheItemKind) {
  EXPECT_TRUE(feasible(make(5, 5, 0, 1, 0, 0, 0, NavigateGoal{ItemKind::Rock})));
  EXPECT_FALSE(feasible(make(5, 5, 1, 0, 0, 0, 0, NavigateGoal{ItemKind::Rock})));
  EXPECT_TRUE(feasible(make(5, 5, 0, 0, 1, 0, 0, NavigateGoal{ItemKind::CraftingTable})));
}

TEST(Feasible, LowFidelityCapacity) {
  // 3 objects + agent in 2x2 cells fits; 4 objects + agent does not.
  EXPECT_TRUE(feasible(make(2, 2, 3, 0, 0, 0, 0, NavigateGoal{ItemKind::Tree})));
  EXPECT_FALSE(feasible(make(2, 2, 4, 0, 0, 0, 0, NavigateGoal{ItemKind::Tree})));
  EXPECT_FALSE(feasible(make(2.5, 2, 1, 0, 0, 0, 0, NavigateGoal{ItemKind::Tree})));
}

TEST(Feasible, HighFidelityFootprint) {
  EXPECT_TRUE(feasible(make(4, 4, 4, 2, 1, 0, 0, CraftGoal{}), Fidelity::High));
  // 8 discs of radius 0.15 cover 0.565 m^2 > 0.5 m^2.
  EXPECT_FALSE(feasible(make(1, 0.5, 7, 0, 0, 0, 0, NavigateGoal{ItemKind::Tree}), Fidelity::High));
}

TEST(Feasible, RejectsNegativeAndOutOfRangeCounts) {
  EXPECT_FALSE(feasible(make(5, 5, -1, 1, 1, 2, 0, CraftGoal{})));
  EXPECT_FALSE(feasible(make(5, 5, 2, 1, 2, 0, 0, CraftGoal{})));
  EXPECT_FALSE(feasible(make(0, 5, 2, 1, 1, 0, 0, CraftGoal{})));
}

TEST(TargetTask, PlainAndFireVariants) {
  EXPECT_EQ(target_task_params(EnvVariant::Plain), make(10, 10, 4, 2, 1, 0, 0, CraftGoal{}));
  EXPECT_EQ(target_task_params(EnvVariant::Fire), make(10, 10, 4, 2, 1, 0, 0, CraftGoal{}, 1));
  EXPECT_EQ(target_task_params(EnvVariant::Fire, 3).fires_env, 3);
  EXPECT_TRUE(feasible(target_task_params(EnvVariant::Plain)));
  EXPECT_EQ(target_task_params(EnvVariant::Plain), target_task_params(EnvVariant::Plain));
}

TEST(GoalCategories, OrderedNavigateBreakCraft) {
  const auto& c = goal_categories();
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], GoalCategory::Navigate);
  EXPECT_EQ(c[1], GoalCategory::Break);
  EXPECT_EQ(c[2], GoalCategory::Craft);
}

TEST(TaskParams, SetRoundsCountsTiesToEven) {
  TaskParams p;
  p.set(Param::Trees, 2.5);
  EXPECT_EQ(p.trees_env, 2);
  p.set(Param::Trees, 3.5);
  EXPECT_EQ(p.trees_env, 4);
  p.set(Param::Rocks, 0.49);
  EXPECT_EQ(p.rocks_env, 0);
  p.set(Param::Width, 2.5);
  EXPECT_EQ(p.width, 2.5);
}

TEST(TaskParams, NumericRoundTripsThroughGetAndSet) {
  const TaskParams p = make(7, 6, 3, 1, 1, 2, 0, BreakGoal{1, 1}, 1);
  TaskParams q;
  q.goal = p.goal;
  const ParamVector v = p.numeric();
  for (std::size_t i = 0; i < kNumParams; ++i) q.set(static_cast<Param>(i), v[i]);
  EXPECT_EQ(p, q);
}

TEST(Ranges, DefaultsMatchTheTargetMaxima) {
  const ParamRanges r = default_lf_ranges(EnvVariant::Plain);
  EXPECT_EQ(r[Param::Width], (Interval{4, 10}));
  EXPECT_EQ(r[Param::Height], (Interval{4, 10}));
  EXPECT_EQ(r[Param::Trees], (Interval{0, 4}));
  EXPECT_EQ(r[Param::Rocks], (Interval{0, 2}));
  EXPECT_EQ(r[Param::CraftingTables], (Interval{0, 1}));
  EXPECT_EQ(r[Param::WoodInv], (Interval{0, 2}));
  EXPECT_EQ(r[Param::StoneInv], (Interval{0, 1}));
  EXPECT_TRUE(contains(r, target_task_params(EnvVariant::Plain)));
  const ParamRanges f = default_lf_ranges(EnvVariant::Fire);
  EXPECT_EQ(f[Param::Fires], (Interval{0, 2}));
}

TEST(Ranges, ValidateRejectsInvertedBounds) {
  ParamRanges r = default_lf_ranges(EnvVariant::Plain);
  r[Param::Trees] = {3, 1};
  EXPECT_THROW(validate(r), ValidationError);
}

TEST(RandomSource, CraftOutputsCanCraft) {
  Rng rng(11);
  const ParamRanges r = default_lf_ranges(EnvVariant::Plain);
  for (int i = 0; i < 500; ++i) {
    const TaskParams p = random_source_params(rng, r, CraftGoal{});
    EXPECT_GE(p.wood_inv + p.trees_env, 2);
    EXPECT_GE(p.stone_inv + p.rocks_env, 1);
    EXPECT_EQ(p.crafting_tables, 1);
    EXPECT_TRUE(feasible(p));
    EXPECT_TRUE(contains(r, p));
  }
}

TEST(RandomSource, NavigateTreeHasATree) {
  Rng rng(5);
  const ParamRanges r = default_lf_ranges(EnvVariant::Plain);
  for (int i = 0; i < 200; ++i)
    EXPECT_GE(random_source_params(rng, r, NavigateGoal{ItemKind::Tree}).trees_env, 1);
}

TEST(RandomSource, DeterministicForAFixedSeed) {
  const ParamRanges r = default_lf_ranges(EnvVariant::Fire);
  Rng a(7), b(7);
  EXPECT_EQ(random_source_params(a, r, CraftGoal{}), random_source_params(b, r, CraftGoal{}));
}

TEST(RandomSource, ImpossibleRangesThrow) {
  ParamRanges r = default_lf_ranges(EnvVariant::Plain);
  r[Param::CraftingTables] = {0, 0};
  Rng rng(1);
  EXPECT_THROW(random_source_params(rng, r, CraftGoal{}), InfeasibleRanges);
}

TEST(RandomTask, EveryCategoryIsFeasibleWithinDefaults) {
  Rng rng(3);
  for (auto variant : {EnvVariant::Plain, EnvVariant::Fire}) {
    const ParamRanges r = default_lf_ranges(variant);
    for (GoalCategory c : goal_categories()) {
      ASSERT_TRUE(category_achievable(r, c));
      for (int i = 0; i < 200; ++i) {
        const TaskParams p = random_task_for_category(rng, r, c);
        EXPECT_EQ(category_of(p.goal), c);
        EXPECT_TRUE(feasible(p)) << to_string(p);
        EXPECT_TRUE(contains(r, p)) << to_string(p);
      }
    }
  }
}

TEST(RandomTask, BreakSubsetOfWhatIsPresent) {
  Rng rng(9);
  const ParamRanges r = default_lf_ranges(EnvVariant::Plain);
  for (int i = 0; i < 300; ++i) {
    const TaskParams p = random_task_for_category(rng, r, GoalCategory::Break);
    const auto g = std::get<BreakGoal>(p.goal);
    EXPECT_GE(g.trees, 1);
    EXPECT_LE(g.trees, p.trees_env);
    EXPECT_GE(g.rocks, 0);
    EXPECT_LE(g.rocks, p.rocks_env);
  }
}

}  // namespace
}  // namespace acute
