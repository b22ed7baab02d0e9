#include <gtest/gtest.h>

#include <cmath>

#include "acute/errors.hpp"
#include "acute/mapping.hpp"

namespace acute {
namespace {

AffineMap standard_map(EnvVariant v = EnvVariant::Plain) {
  return AffineMap::standard(default_lf_ranges(v));
}

AffineMap identity_map() {
  AffineMap m = standard_map();
  m.scale.fill(1.0);
  m.offset.fill(0.0);
  return m;
}

TEST(Forward, IdentityMapIsIdentity) {
  const TaskParams p = target_task_params(EnvVariant::Fire);
  EXPECT_EQ(forward(identity_map(), p), p);
}

TEST(Forward, TenCellsMapToFourMeters) {
  const TaskParams hf = forward(standard_map(), target_task_params(EnvVariant::Plain));
  EXPECT_EQ(hf.width, 4.0);
  EXPECT_EQ(hf.height, 4.0);
  EXPECT_EQ(hf.trees_env, 4);
  EXPECT_EQ(hf.rocks_env, 2);
  EXPECT_EQ(hf.crafting_tables, 1);
  EXPECT_EQ(hf.goal, GoalSpec{CraftGoal{}});
}

TEST(Forward, DeskScaleTargetIsExact) {
  TaskParams lf = target_task_params(EnvVariant::Plain);
  lf.width = lf.height = 6;
  // 6 * 0.4 is not 2.4 in binary; the quantized result must be.
  EXPECT_EQ(forward(standard_map(), lf).width, 2.4);
}

TEST(Inverse, FourMetersMapBackToTenCells) {
  TaskParams hf = forward(standard_map(), target_task_params(EnvVariant::Plain));
  EXPECT_EQ(inverse(standard_map(), hf).width, 10.0);
  EXPECT_EQ(inverse(standard_map(), hf), target_task_params(EnvVariant::Plain));
}

TEST(Inverse, ZeroScaleIsNonInvertible) {
  AffineMap m = standard_map();
  m.scale[static_cast<std::size_t>(Param::Rocks)] = 0.0;
  EXPECT_THROW(inverse(m, target_task_params(EnvVariant::Plain)), NonInvertible);
}

TEST(Inverse, RoundTripOverRandomTasks) {
  const ParamRanges r = default_lf_ranges(EnvVariant::Fire);
  const AffineMap m = AffineMap::standard(r);
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const auto c = goal_categories()[static_cast<std::size_t>(i % 3)];
    const TaskParams p = random_task_for_category(rng, r, c);
    const TaskParams hf = forward(m, p);
    EXPECT_EQ(hf.goal, p.goal);
    EXPECT_EQ(inverse(m, hf), p) << to_string(p);
  }
}

TEST(Anchors, HoldsForStandardMap) {
  const AffineMap m = standard_map();
  const TaskParams lf = target_task_params(EnvVariant::Plain);
  EXPECT_TRUE(anchors(m, lf, forward(m, lf)));
  TaskParams off = forward(m, lf);
  off.width = 4.1;
  EXPECT_FALSE(anchors(m, lf, off));
}

TEST(MapRanges, ScalesBounds) {
  const ParamRanges lf = default_lf_ranges(EnvVariant::Plain);
  const AffineMap m = AffineMap::standard(lf);
  EXPECT_NEAR(m.hf_ranges[Param::Width].min, 1.6, 1e-12);
  EXPECT_NEAR(m.hf_ranges[Param::Width].max, 4.0, 1e-12);
  EXPECT_EQ(m.hf_ranges[Param::Trees], (Interval{0, 4}));
}

TEST(Noise, SigmaIsRangeOverSix) {
  const NoiseModel n = NoiseModel::from_ranges(standard_map().hf_ranges);
  EXPECT_NEAR(n.sigma[static_cast<std::size_t>(Param::Trees)], 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(n.sigma[static_cast<std::size_t>(Param::Width)], 2.4 / 6.0, 1e-12);
  EXPECT_EQ(n.max_rejects, 1000);
}

TEST(Noise, ZeroSigmaEqualsForward) {
  NoiseModel n;
  n.sigma.fill(0.0);
  Rng rng(1);
  const TaskParams lf = target_task_params(EnvVariant::Plain);
  EXPECT_EQ(forward_noisy(standard_map(), n, lf, rng), forward(standard_map(), lf));
}

TEST(Noise, OutputsAreFeasibleAndKeepTheGoal) {
  const AffineMap m = standard_map();
  const NoiseModel n = NoiseModel::from_ranges(m.hf_ranges);
  Rng rng(4);
  Rng task_rng(5);
  for (int i = 0; i < 1000; ++i) {
    const TaskParams p =
        random_task_for_category(task_rng, m.lf_ranges, goal_categories()[i % 3]);
    const TaskParams q = forward_noisy(m, n, p, rng);
    EXPECT_TRUE(feasible(q, Fidelity::High)) << to_string(q);
    EXPECT_EQ(q.goal, p.goal);
  }
}

TEST(Noise, EmpiricalSigmaMatches) {
  const NoiseModel n = NoiseModel::from_ranges(standard_map().hf_ranges);
  Rng rng(8);
  constexpr int kDraws = 100000;
  ParamVector sum{}, sum_sq{};
  for (int i = 0; i < kDraws; ++i) {
    const ParamVector d = sample_noise(n, rng);
    for (std::size_t k = 0; k < kNumParams; ++k) {
      sum[k] += d[k];
      sum_sq[k] += d[k] * d[k];
    }
  }
  for (std::size_t k = 0; k < kNumParams; ++k) {
    if (n.sigma[k] == 0.0) continue;
    const double mean = sum[k] / kDraws;
    const double sd = std::sqrt((sum_sq[k] - kDraws * mean * mean) / (kDraws - 1));
    EXPECT_NEAR(sd / n.sigma[k], 1.0, 0.05) << param_key(static_cast<Param>(k));
  }
}

TEST(Noise, ExhaustedBudgetThrows) {
  // A near-full arena that almost every perturbation breaks.
  AffineMap m = identity_map();
  NoiseModel n;
  n.sigma.fill(0.0);
  n.sigma[static_cast<std::size_t>(Param::Trees)] = 1e4;
  n.max_rejects = 3;
  TaskParams p;
  p.width = p.height = 1;
  p.trees_env = 0;
  p.crafting_tables = 1;
  p.goal = NavigateGoal{ItemKind::CraftingTable};
  Rng rng(2);
  EXPECT_THROW(forward_noisy(m, n, p, rng), RejectionBudgetExhausted);
}

}  // namespace
}  // namespace acute
