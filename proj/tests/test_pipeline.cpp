#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "acute/errors.hpp"
#include "acute/pipeline.hpp"
#include "acute/serialization.hpp"

namespace acute {
namespace {

namespace fs = std::filesystem;

AcuteSetup small_setup() {
  AcuteSetup s;
  s.lf_ranges = default_lf_ranges(EnvVariant::Plain);
  s.map = AffineMap::standard(s.lf_ranges);
  TaskParams lf = target_task_params(EnvVariant::Plain);
  lf.width = lf.height = 4;
  lf.trees_env = 2;
  lf.rocks_env = 1;
  s.hf_target = forward(s.map, lf);
  s.lf_ranges = ranges_below(lf, EnvVariant::Plain);
  s.map = AffineMap::standard(s.lf_ranges);
  s.beam = BeamConfig{1, 2, 3};
  s.stop_lf = StopCriterion{0.85, 5, 10};
  s.stop_hf = StopCriterion{0.85, 5, 8};
  s.lf_learner.hidden = 8;
  s.hf_learner.hidden = 8;
  return s;
}

TaskParams task(double w, int trees, int rocks, int tables, GoalSpec goal) {
  TaskParams p;
  p.width = p.height = w;
  p.trees_env = trees;
  p.rocks_env = rocks;
  p.crafting_tables = tables;
  p.goal = goal;
  return p;
}

fs::path write_temp(const std::string& name, const Json& j) {
  const fs::path dir = fs::temp_directory_path() / "acute_pipeline_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

TEST(Setup, LfTargetIsTheInverseImage) {
  const AcuteSetup s = small_setup();
  EXPECT_EQ(s.lf_target().width, 4.0);
  EXPECT_EQ(forward(s.map, s.lf_target()), s.hf_target);
}

TEST(LoadHc, AcceptsACurriculumEndingInTheTarget) {
  const AcuteSetup s = small_setup();
  const TaskParams lf = s.lf_target();
  Json j;
  j["tasks"] = Json::array({Json{{"lf", to_json(task(3, 1, 0, 0, NavigateGoal{ItemKind::Tree}))}},
                            Json{{"lf", to_json(task(4, 2, 1, 0, BreakGoal{2, 1}))}},
                            Json{{"lf", to_json(task(4, 2, 1, 1, CraftGoal{}))}},
                            Json{{"lf", to_json(lf)}}});
  const auto tasks = load_hc(write_temp("hc_ok.json", j), lf);
  ASSERT_EQ(tasks.size(), 4u);
  EXPECT_EQ(tasks.back(), lf);
  EXPECT_EQ(tasks[1].goal, (GoalSpec{BreakGoal{2, 1}}));
}

TEST(LoadHc, RejectsAWrongLastEntry) {
  const AcuteSetup s = small_setup();
  Json j;
  j["tasks"] = Json::array({Json{{"lf", to_json(task(3, 1, 0, 0, NavigateGoal{ItemKind::Tree}))}}});
  EXPECT_THROW(load_hc(write_temp("hc_last.json", j), s.lf_target()), ValidationError);
}

TEST(LoadHc, RejectsAnInfeasibleEntry) {
  const AcuteSetup s = small_setup();
  Json j;
  j["tasks"] = Json::array({Json{{"lf", to_json(task(4, 2, 1, 0, CraftGoal{}))}},
                            Json{{"lf", to_json(s.lf_target())}}});
  try {
    load_hc(write_temp("hc_bad.json", j), s.lf_target());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("task 0"), std::string::npos) << e.what();
  }
}

TEST(MapCurriculum, ExactMapIsElementwiseForward) {
  const AcuteSetup s = small_setup();
  const std::vector<TaskParams> lf = {task(3, 1, 0, 0, NavigateGoal{ItemKind::Tree}), s.lf_target()};
  Rng rng(1);
  const auto hf = map_curriculum(lf, s.map, std::nullopt, rng);
  ASSERT_EQ(hf.size(), 2u);
  EXPECT_EQ(hf[0], forward(s.map, lf[0]));
  EXPECT_EQ(hf[1], s.hf_target);
}

TEST(MapCurriculum, NoiseNeverTouchesTheTarget) {
  const AcuteSetup s = small_setup();
  const NoiseModel noise = NoiseModel::from_ranges(s.map.hf_ranges);
  const std::vector<TaskParams> lf = {task(4, 2, 1, 0, BreakGoal{1, 1}), s.lf_target()};
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const auto hf = map_curriculum(lf, s.map, noise, rng);
    EXPECT_EQ(hf.back(), s.hf_target);
    EXPECT_TRUE(feasible(hf.front(), Fidelity::High));
    EXPECT_EQ(hf.front().goal, lf.front().goal);
  }
}

TEST(RunAcute, ScratchLearnsOnlyTheTarget) {
  const AcuteSetup s = small_setup();
  const TrialResult r = run_acute(s, CurriculumMode::Scratch, 5);
  ASSERT_EQ(r.hf_tasks.size(), 1u);
  EXPECT_TRUE(r.target().is_target);
  EXPECT_EQ(r.target().hf_params, s.hf_target);
  EXPECT_EQ(r.lf_sunk_timesteps, 0);
  EXPECT_EQ(r.target().start_offset, 0);
  EXPECT_FALSE(r.search.has_value());
}

TEST(RunAcute, HandcraftedChainAccumulatesOffsets) {
  const AcuteSetup s = small_setup();
  const std::vector<TaskParams> hc = {task(3, 1, 0, 0, NavigateGoal{ItemKind::Tree}),
                                      task(4, 2, 1, 1, CraftGoal{}), s.lf_target()};
  const TrialResult r = run_acute(s, CurriculumMode::HC, 6, &hc);
  ASSERT_EQ(r.hf_tasks.size(), 3u);
  long offset = 0;
  for (std::size_t u = 0; u < r.hf_tasks.size(); ++u) {
    EXPECT_EQ(r.hf_tasks[u].task_index, static_cast<int>(u));
    EXPECT_EQ(r.hf_tasks[u].start_offset, offset);
    EXPECT_EQ(r.hf_tasks[u].hf_params, forward(s.map, hc[u]));
    EXPECT_EQ(r.hf_tasks[u].is_target, u + 1 == r.hf_tasks.size());
    offset += r.hf_tasks[u].result.timesteps_used;
  }
  EXPECT_EQ(r.total_timesteps(), offset);
  EXPECT_EQ(r.final_policy, r.target().result.final_policy);
}

TEST(RunAcute, CurriculumOffsetsIncludeTheSearch) {
  const AcuteSetup s = small_setup();
  const TrialResult r = run_acute(s, CurriculumMode::AC, 7);
  ASSERT_TRUE(r.search.has_value());
  EXPECT_EQ(r.lf_curriculum.size(), 3u);
  EXPECT_EQ(r.lf_curriculum.back(), s.lf_target());
  EXPECT_EQ(r.lf_sunk_timesteps, r.search->sunk_timesteps);
  EXPECT_EQ(r.hf_tasks.front().start_offset, r.lf_sunk_timesteps);
  EXPECT_EQ(r.hf_curriculum.size(), 3u);
  for (std::size_t u = 0; u < 3; ++u) EXPECT_EQ(r.hf_curriculum[u], forward(s.map, r.lf_curriculum[u]));
  // The target curve starts after the search and every source task.
  const LearningCurve c = r.target_curve();
  EXPECT_EQ(c.sunk_cost_timesteps, r.target().start_offset);
  EXPECT_GT(c.sunk_cost_timesteps, r.lf_sunk_timesteps);
}

TEST(RunAcute, SameSeedSameResult) {
  const AcuteSetup s = small_setup();
  const TrialResult a = run_acute(s, CurriculumMode::AC, 8, nullptr, 1);
  const TrialResult b = run_acute(s, CurriculumMode::AC, 8, nullptr, 4);
  EXPECT_EQ(a.lf_curriculum, b.lf_curriculum);
  EXPECT_EQ(a.total_timesteps(), b.total_timesteps());
  EXPECT_EQ(a.final_policy, b.final_policy);
}

TEST(TrialSeed, DistinctPerTrial) {
  EXPECT_NE(trial_seed(0, 0), trial_seed(0, 1));
  EXPECT_EQ(trial_seed(3, 2), trial_seed(3, 2));
}

}  // namespace
}  // namespace acute
