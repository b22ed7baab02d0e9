#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "acute/commands.hpp"
#include "acute/config.hpp"
#include "acute/curve_csv.hpp"
#include "acute/errors.hpp"
#include "acute/serialization.hpp"
#include "acute/svg.hpp"

namespace acute {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

Json tiny_config(const std::string& mode) {
  return Json::parse(R"({
    "label": ")" + mode + R"(",
    "mode": ")" + mode + R"(",
    "hf_target": {"width": 1.6, "height": 1.6, "trees_env": 2, "rocks_env": 1,
                  "crafting_tables": 1, "wood_inv": 0, "stone_inv": 0,
                  "goal": {"kind": "craft"}},
    "beam": {"width_W": 1, "branch_N": 2, "length_U": 3},
    "stop": {"lf": {"delta_g": 0.85, "window_s": 5, "budget_b": 10},
             "hf": {"delta_g": 0.85, "window_s": 5, "budget_b": 10}},
    "learner": {"lf": {"hidden": 8}, "hf": {"hidden": 8}},
    "metrics": {"jumpstart_episodes": 5,
                "threshold": {"mode": "success_rate", "value": 0.85, "window": 5}},
    "trials": 2,
    "seed": 3
  })");
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("acute_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  fs::path write(const std::string& name, const Json& j) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "acute");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    out_.str("");
    err_.str("");
    return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, ValidConfigPrintsHash) {
  const auto cfg = write("c.json", tiny_config("ac"));
  EXPECT_EQ(run({"validate-config", "--config", cfg.string()}), 0) << err_.str();
  EXPECT_NE(out_.str().find("config_hash=" + config_hash(load_config(cfg))), std::string::npos);
}

TEST_F(CliTest, ShortCurriculumIsAConfigError) {
  Json j = tiny_config("ac");
  j["beam"]["length_U"] = 2;
  const auto cfg = write("c.json", j);
  EXPECT_EQ(run({"validate-config", "--config", cfg.string()}), 2);
  EXPECT_NE(err_.str().find("config.beam.length_U"), std::string::npos) << err_.str();
  EXPECT_NE(err_.str().find("ConfigError"), std::string::npos) << err_.str();
}

TEST_F(CliTest, ErrorsNameTheOffendingPath) {
  Json j = tiny_config("ac");
  j["stop"]["hf"]["budget_b"] = 2;
  EXPECT_THROW(parse_config(j), ConfigError);
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("config.stop.hf"), std::string::npos) << e.what();
  }
  Json unknown = tiny_config("ac");
  unknown["beam"]["depth"] = 3;
  try {
    parse_config(unknown);
    FAIL() << "unknown key accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("depth"), std::string::npos) << e.what();
  }
  Json hc = tiny_config("hc");
  EXPECT_THROW(parse_config(hc), ConfigError);
}

TEST_F(CliTest, HashIgnoresOutputDirButNotSeed) {
  const ExperimentConfig a = parse_config(tiny_config("ac"));
  ExperimentConfig b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 4;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_EQ(config_hash(parse_config(to_json(a))), config_hash(a));
}

TEST_F(CliTest, CurveCsvRoundTrips) {
  std::vector<CurveRow> rows = {{0, 0, 0, 12, -12.0, false},
                                {0, 0, 1, 30, 0.1 + 0.2, false},
                                {0, 1, 0, 41, 989.0, true},
                                {1, 0, 0, 7, -7.0, false}};
  const std::string text = write_curve_csv(rows, Stamp{"abcdef0123456789", 42}, "ac");
  const fs::path p = dir_ / "curve.csv";
  std::ofstream(p) << text;
  const CurveFile f = read_curve_csv(p);
  EXPECT_EQ(f.config_hash, "abcdef0123456789");
  EXPECT_EQ(f.seed, 42u);
  EXPECT_EQ(f.method, "ac");
  ASSERT_EQ(f.rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(f.rows[i].cumulative_timesteps, rows[i].cumulative_timesteps);
    EXPECT_EQ(f.rows[i].ret, rows[i].ret);
    EXPECT_EQ(f.rows[i].success, rows[i].success);
  }
  const auto curves = f.target_curves();
  EXPECT_EQ(curves.at(0).sunk_cost_timesteps, 30);
  EXPECT_EQ(curves.at(0).points.size(), 1u);
  EXPECT_EQ(curves.at(1).sunk_cost_timesteps, 0);
}

TEST_F(CliTest, MalformedCsvNamesTheLine) {
  const fs::path p = dir_ / "bad.csv";
  std::ofstream(p) << "# acute-curve/1 config_hash=0000000000000000 seed=1 method=x\n"
                   << "trial,task_index,episode,cumulative_timesteps,return,success\n"
                   << "0,0,0,10,-10,0\n"
                   << "0,0,1,zz,-10,0\n";
  try {
    read_curve_csv(p);
    FAIL() << "malformed CSV accepted";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos) << e.what();
  }
}

TEST_F(CliTest, PolicyReloadsBitExact) {
  Rng rng(5);
  const Mlp m = Mlp::random(7, 5, kNumActions, rng);
  save_policy(m, dir_ / "policy", Stamp{"0123456789abcdef", 9});
  EXPECT_EQ(load_policy(dir_ / "policy"), m);
  // Truncation is detected.
  fs::resize_file(dir_ / "policy.bin", fs::file_size(dir_ / "policy.bin") - 1);
  EXPECT_THROW(load_policy(dir_ / "policy"), SchemaError);
}

TEST_F(CliTest, ScratchPipelineProducesAllArtifacts) {
  const auto cfg = write("scratch.json", tiny_config("scratch"));
  ASSERT_EQ(run({"run-hf", "--config", cfg.string(), "--out", (dir_ / "s").string(), "--trajectory"}), 0)
      << err_.str();
  for (const char* f : {"curve.csv", "run.json", "policy_trial0.bin", "policy_trial0.json",
                        "policy_trial1.bin", "trajectory.json"})
    EXPECT_TRUE(fs::exists(dir_ / "s" / f)) << f;
  const CurveFile curve = read_curve_csv(dir_ / "s" / "curve.csv");
  EXPECT_EQ(curve.config_hash, config_hash(load_config(cfg)));
  for (const auto& r : curve.rows) EXPECT_EQ(r.task_index, 0);

  // Self-comparison gives zero jumpstart; one row per trial and run.
  ASSERT_EQ(run({"eval", "--config", cfg.string(), "--out", (dir_ / "e").string(),
                 (dir_ / "s").string(), "--baseline", (dir_ / "s").string()}),
            0)
      << err_.str();
  const auto rows = data_lines(dir_ / "e" / "metrics.csv");
  ASSERT_EQ(rows.size(), 1u + 2u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(split(rows[i])[2], "0") << rows[i];

  // Plots are byte-identical across invocations.
  ASSERT_EQ(run({"plot", "--config", cfg.string(), "--out", (dir_ / "p1").string(),
                 (dir_ / "s" / "curve.csv").string(), "--trajectory", (dir_ / "s" / "trajectory.json").string()}),
            0)
      << err_.str();
  ASSERT_EQ(run({"plot", "--config", cfg.string(), "--out", (dir_ / "p2").string(),
                 (dir_ / "s" / "curve.csv").string(), "--trajectory", (dir_ / "s" / "trajectory.json").string()}),
            0);
  EXPECT_EQ(slurp(dir_ / "p1" / "learning_curves.svg"), slurp(dir_ / "p2" / "learning_curves.svg"));
  EXPECT_EQ(slurp(dir_ / "p1" / "replay.svg"), slurp(dir_ / "p2" / "replay.svg"));
  EXPECT_NE(slurp(dir_ / "p1" / "learning_curves.svg").find(curve.config_hash), std::string::npos);
}

TEST_F(CliTest, EvalRowCountIsTrialsTimesRuns) {
  const auto scratch = write("scratch.json", tiny_config("scratch"));
  const auto ac = write("ac.json", tiny_config("ac"));
  ASSERT_EQ(run({"run-hf", "--config", scratch.string(), "--out", (dir_ / "s").string()}), 0) << err_.str();
  ASSERT_EQ(run({"optimize-lf", "--config", ac.string(), "--out", (dir_ / "m").string()}), 0) << err_.str();
  ASSERT_EQ(run({"run-hf", "--config", ac.string(), "--manifest", (dir_ / "m" / "manifest.json").string(),
                 "--out", (dir_ / "a").string()}),
            0)
      << err_.str();
  ASSERT_EQ(run({"eval", "--config", ac.string(), "--out", (dir_ / "e").string(), (dir_ / "a").string(),
                 (dir_ / "s").string(), "--baseline", (dir_ / "s").string()}),
            0)
      << err_.str();
  EXPECT_EQ(data_lines(dir_ / "e" / "metrics.csv").size(), 1u + 2u * 2u);
  const CurveFile curve = read_curve_csv(dir_ / "a" / "curve.csv");
  int max_task = 0;
  for (const auto& r : curve.rows) max_task = std::max(max_task, r.task_index);
  EXPECT_EQ(max_task, 2);
}

TEST_F(CliTest, MissingBaselineIsAUsageError) {
  const auto cfg = write("c.json", tiny_config("scratch"));
  EXPECT_EQ(run({"eval", "--config", cfg.string(), "--out", (dir_ / "e").string(), dir_.string()}), 2);
}

TEST_F(CliTest, MissingConfigIsAUsageError) {
  EXPECT_EQ(run({"run-hf", "--config", (dir_ / "nope.json").string()}), 2);
  EXPECT_EQ(run({"no-such-command"}), 2);
}

TEST_F(CliTest, ManifestIsByteIdenticalForTheSameSeed) {
  const auto cfg = write("ac.json", tiny_config("ac"));
  ASSERT_EQ(run({"optimize-lf", "--config", cfg.string(), "--out", (dir_ / "m1").string()}), 0) << err_.str();
  ASSERT_EQ(run({"optimize-lf", "--config", cfg.string(), "--out", (dir_ / "m2").string(), "--jobs", "4"}), 0);
  EXPECT_EQ(slurp(dir_ / "m1" / "manifest.json"), slurp(dir_ / "m2" / "manifest.json"));
  EXPECT_EQ(slurp(dir_ / "m1" / "lf_log.csv"), slurp(dir_ / "m2" / "lf_log.csv"));
  const Json m = Json::parse(slurp(dir_ / "m1" / "manifest.json"));
  EXPECT_EQ(m["trials"][0]["tasks"].size(), 3u);
  EXPECT_EQ(m["config_hash"], config_hash(load_config(cfg)));
}

TEST(Svg, CurvesAreDeterministicAndStartAtZero) {
  LearningCurve a = LearningCurve::from_episodes({-10, -5, 900}, {10, 10, 5}, {0, 0, 1}, 1000);
  LearningCurve b = LearningCurve::from_episodes({-10, 950, 900}, {10, 3, 5}, {0, 1, 1}, 2000);
  const std::vector<CurveSeries> s = {{"ac", {a, b}}, {"scratch", {a}}};
  const Stamp stamp{"00000000deadbeef", 1};
  const std::string svg = render_learning_curves(s, stamp);
  EXPECT_EQ(svg, render_learning_curves(s, stamp));
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find(">0<"), std::string::npos);
  EXPECT_NE(svg.find("00000000deadbeef"), std::string::npos);
}

}  // namespace
}  // namespace acute
