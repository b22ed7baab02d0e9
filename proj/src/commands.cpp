#include "acute/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "acute/curve_csv.hpp"
#include "acute/errors.hpp"
#include "acute/parallel.hpp"
#include "acute/planar_env.hpp"
#include "acute/svg.hpp"

namespace fs = std::filesystem;

namespace acute {

namespace {

constexpr const char* kManifestSchema = "acute-manifest/1";
constexpr const char* kExchangeRate = "1 LF timestep = 1 HF timestep";
constexpr std::uint64_t kRolloutStream = 5;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

Json stamp_json(const Stamp& s) { return {{"config_hash", s.config_hash}, {"seed", s.seed}}; }

// Parallelism goes to trials when there are several, else to beam nodes.
int inner_jobs(const ExperimentConfig& cfg, int jobs) { return cfg.trials > 1 ? 1 : jobs; }

std::vector<CurriculumResult> optimize_all(const ExperimentConfig& cfg, int jobs) {
  const AcuteSetup setup = cfg.setup();
  std::vector<CurriculumResult> results(static_cast<std::size_t>(cfg.trials));
  parallel_for(results.size(), cfg.trials > 1 ? jobs : 1, [&](std::size_t k) {
    results[k] = optimize_curriculum(setup, trial_seed(cfg.seed, static_cast<int>(k)),
                                     inner_jobs(cfg, jobs));
  });
  return results;
}

fs::path write_manifest(const ExperimentConfig& cfg, const std::vector<CurriculumResult>& results,
                        const fs::path& out) {
  const AcuteSetup setup = cfg.setup();
  const Stamp stamp = stamp_of(cfg);
  Json trials = Json::array();
  std::ostringstream log;
  log << "# acute-lflog/1 config_hash=" << stamp.config_hash << " seed=" << stamp.seed << '\n'
      << "trial,level,slot,index,width,height,trees_env,rocks_env,crafting_tables,wood_inv,"
         "stone_inv,fires_env,goal,episodes,timesteps,converged,kept\n";
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    Json tasks = Json::array();
    for (const auto& t : r.tasks)
      tasks.push_back({{"lf", to_json(t.params)},
                       {"hf", to_json(forward(setup.map, t.params))},
                       {"episodes", t.episodes},
                       {"timesteps", t.timesteps},
                       {"converged", t.converged}});
    trials.push_back({{"trial", k},
                      {"seed", trial_seed(cfg.seed, static_cast<int>(k))},
                      {"sunk_episodes", r.sunk_episodes},
                      {"sunk_timesteps", r.sunk_timesteps},
                      {"tasks", tasks}});
    for (const auto& n : r.nodes) {
      const auto& p = n.params;
      log << k << ',' << n.level << ',' << n.slot << ',' << n.index << ','
          << format_number(p.width) << ',' << format_number(p.height) << ',' << p.trees_env << ','
          << p.rocks_env << ',' << p.crafting_tables << ',' << p.wood_inv << ',' << p.stone_inv
          << ',' << p.fires_env << ',' << quoted(to_string(p.goal)) << ',' << n.episodes << ','
          << n.timesteps << ',' << (n.converged ? 1 : 0) << ',' << (n.kept ? 1 : 0) << '\n';
    }
  }
  const Json manifest = {{"schema", kManifestSchema},
                         {"config_hash", stamp.config_hash},
                         {"seed", stamp.seed},
                         {"exchange_rate", kExchangeRate},
                         {"map", {{"scale", to_json(setup.map.scale)},
                                  {"offset", to_json(setup.map.offset)}}},
                         {"lf_target", to_json(setup.lf_target())},
                         {"hf_target", to_json(setup.hf_target)},
                         {"beam", {{"width_W", cfg.beam.width_W},
                                   {"branch_N", cfg.beam.branch_N},
                                   {"length_U", cfg.beam.length_U}}},
                         {"trials", trials}};
  fs::create_directories(out);
  const fs::path path = out / "manifest.json";
  write_json(path, manifest);
  write_text(out / "lf_log.csv", log.str());
  return path;
}

Json rollout(const Mlp& policy, const TaskParams& task, const LearnerConfig& learner,
             std::uint64_t seed) {
  PlanarEnv env;
  env.set_reward_scheme(RewardScheme::target());
  Rng rng = make_rng(seed, {kRolloutStream});
  Observation obs = env.reset(task, rng);
  Json path = Json::array();
  Json actions = Json::array();
  auto pose = [&] {
    return Json{{"x", env.agent().x}, {"y", env.agent().y}, {"theta", env.agent().theta}};
  };
  path.push_back(pose());
  double total = 0.0;
  bool success = false;
  while (env.active()) {
    const Action a = select_action(policy, obs.values(), 0.0, learner.algorithm, rng);
    StepOutcome s = env.step(a);
    actions.push_back(to_string(a));
    path.push_back(pose());
    total += s.reward;
    success = s.success;
    obs = std::move(s.observation);
  }
  // Layout after reset, so the objects broken during the episode still show.
  env.reset(task, rng = make_rng(seed, {kRolloutStream}));
  return {{"layout", to_json(env.layout())},
          {"path", path},
          {"actions", actions},
          {"return", total},
          {"success", success}};
}

std::vector<double> jumpstart_values(const std::map<int, LearningCurve>& method,
                                     const std::map<int, LearningCurve>& baseline, int d,
                                     std::vector<std::string>& cells) {
  std::vector<double> values;
  for (const auto& [trial, curve] : method) {
    try {
      const double j = jumpstart(curve, baseline.at(trial), d);
      values.push_back(j);
      cells.push_back(format_number(j));
    } catch (const InsufficientEpisodes&) {
      cells.push_back("NA");
    }
  }
  return values;
}

Aggregate mean_sd(const std::vector<double>& v) {
  Aggregate a;
  if (v.empty()) return a;
  for (double x : v) a.mean += x;
  a.mean /= static_cast<double>(v.size());
  if (v.size() < 2) return a;
  double ss = 0.0;
  for (double x : v) ss += (x - a.mean) * (x - a.mean);
  a.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return a;
}

}  // namespace

Stamp stamp_of(const ExperimentConfig& cfg) { return Stamp{config_hash(cfg), cfg.seed}; }

fs::path cmd_optimize_lf(const ExperimentConfig& cfg, int jobs, const fs::path& out) {
  return write_manifest(cfg, optimize_all(cfg, jobs), out);
}

std::vector<std::vector<TaskParams>> load_manifest(const fs::path& path,
                                                   const ExperimentConfig& cfg,
                                                   std::vector<long>* lf_sunk) {
  const Json m = read_json(path);
  const std::string where = path.string();
  if (!m.is_object() || m.value("schema", "") != kManifestSchema)
    throw ValidationError(where + ": expected schema " + kManifestSchema);
  if (!m.contains("trials") || !m["trials"].is_array())
    throw ValidationError(where + ": missing array 'trials'");
  const TaskParams lf_target = cfg.lf_target();
  std::vector<std::vector<TaskParams>> curricula;
  for (int k = 0; k < cfg.trials; ++k) {
    const std::string w = where + ".trials[" + std::to_string(k) + "]";
    if (static_cast<std::size_t>(k) >= m["trials"].size())
      throw ValidationError(w + ": manifest covers only " + std::to_string(m["trials"].size()) +
                            " trials");
    const Json& t = m["trials"][static_cast<std::size_t>(k)];
    if (!t.contains("tasks") || !t["tasks"].is_array() || t["tasks"].empty())
      throw ValidationError(w + ".tasks: expected a non-empty array");
    std::vector<TaskParams> tasks;
    for (std::size_t i = 0; i < t["tasks"].size(); ++i) {
      const std::string tw = w + ".tasks[" + std::to_string(i) + "]";
      if (!t["tasks"][i].contains("lf")) throw ValidationError(tw + ".lf: missing");
      try {
        tasks.push_back(task_params_from_json(t["tasks"][i]["lf"], tw + ".lf"));
      } catch (const SchemaError& e) {
        throw ValidationError(e.what());
      }
      if (!feasible(tasks.back(), Fidelity::Low))
        throw ValidationError(tw + ": infeasible LF task");
    }
    if (tasks.back() != lf_target)
      throw ValidationError(w + ": last task must equal the LF target {" + to_string(lf_target) +
                            "}");
    if (lf_sunk) {
      if (!t.contains("sunk_timesteps") || !t["sunk_timesteps"].is_number_integer())
        throw ValidationError(w + ".sunk_timesteps: missing");
      lf_sunk->push_back(t["sunk_timesteps"].get<long>());
    }
    curricula.push_back(std::move(tasks));
  }
  return curricula;
}

void cmd_run_hf(const ExperimentConfig& cfg, const std::optional<fs::path>& manifest, int jobs,
                const fs::path& out, bool trajectory) {
  const AcuteSetup setup = cfg.setup();
  const Stamp stamp = stamp_of(cfg);
  fs::create_directories(out);

  std::vector<std::vector<TaskParams>> curricula;
  std::vector<long> lf_sunk;
  if (cfg.mode == CurriculumMode::AC) {
    if (manifest) {
      curricula = load_manifest(*manifest, cfg, &lf_sunk);
    } else {
      const auto results = optimize_all(cfg, jobs);
      write_manifest(cfg, results, out);
      for (const auto& r : results) {
        curricula.push_back(r.params());
        lf_sunk.push_back(r.sunk_timesteps);
      }
    }
  } else {
    const std::vector<TaskParams> tasks = cfg.mode == CurriculumMode::HC
                                              ? load_hc(cfg.hc_path, setup.lf_target())
                                              : std::vector<TaskParams>{setup.lf_target()};
    curricula.assign(static_cast<std::size_t>(cfg.trials), tasks);
    lf_sunk.assign(static_cast<std::size_t>(cfg.trials), 0);
  }

  std::vector<TrialResult> trials(static_cast<std::size_t>(cfg.trials));
  parallel_for(trials.size(), jobs, [&](std::size_t k) {
    trials[k] = run_hf_chain(setup, cfg.mode, curricula[k], lf_sunk[k],
                             trial_seed(cfg.seed, static_cast<int>(k)));
  });

  write_text(out / "curve.csv", write_curve_csv(curve_rows(trials), stamp, cfg.label));

  Json runs = Json::array();
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const auto& t = trials[k];
    Json tasks = Json::array();
    for (const auto& task : t.hf_tasks)
      tasks.push_back({{"task_index", task.task_index},
                       {"hf", to_json(task.hf_params)},
                       {"target", task.is_target},
                       {"start_offset", task.start_offset},
                       {"episodes", task.result.episodes_used},
                       {"timesteps", task.result.timesteps_used},
                       {"converged", task.result.converged}});
    runs.push_back({{"trial", k},
                    {"seed", t.seed},
                    {"lf_sunk_timesteps", t.lf_sunk_timesteps},
                    {"total_timesteps", t.total_timesteps()},
                    {"tasks", tasks}});
    save_policy(t.final_policy, out / ("policy_trial" + std::to_string(k)), stamp);
  }
  Json run = stamp_json(stamp);
  run["method"] = cfg.label;
  run["mode"] = to_string(cfg.mode);
  run["exchange_rate"] = kExchangeRate;
  run["trials"] = runs;
  write_json(out / "run.json", run);

  if (trajectory && !trials.empty())
    write_json(out / "trajectory.json",
               rollout(trials.front().final_policy, setup.hf_target, cfg.hf_learner,
                       trials.front().seed));
}

void cmd_eval(const ExperimentConfig& cfg, const std::vector<fs::path>& runs,
              const fs::path& baseline, const fs::path& out) {
  if (runs.empty()) throw ValidationError("eval needs at least one run directory");
  const Stamp stamp = stamp_of(cfg);
  const CurveFile base = read_curve_csv(baseline / "curve.csv");
  const auto base_curves = base.target_curves();
  std::map<int, std::optional<long>> base_ttt;
  for (const auto& [trial, c] : base_curves) base_ttt[trial] = time_to_threshold(c, cfg.threshold);

  std::ostringstream metrics, summary, aggregate;
  const std::string head = " config_hash=" + stamp.config_hash + " seed=" +
                           std::to_string(stamp.seed) + " baseline=" + base.method;
  metrics << "# " << kMetricsSchema << head << '\n'
          << "method,trial,jumpstart,time_to_threshold,sunk_cost,converged\n";
  summary << "# acute-summary/1" << head << '\n'
          << "method,trials,jumpstart_mean,jumpstart_sd,time_to_threshold_delta_mean,wins\n";
  aggregate << "# acute-aggregate/1" << head << '\n' << "method,timesteps,mean,sd\n";

  std::vector<std::pair<std::string, std::vector<LearningCurve>>> all;
  long x_max = 1;
  for (const auto& dir : runs) {
    const CurveFile run = read_curve_csv(dir / "curve.csv");
    const auto curves = run.target_curves();
    for (const auto& [trial, c] : curves)
      if (!base_curves.contains(trial))
        throw ValidationError(dir.string() + ": trial " + std::to_string(trial) +
                              " has no baseline counterpart");
    std::vector<std::string> js;
    const auto j_values = jumpstart_values(curves, base_curves, cfg.jumpstart_episodes, js);
    std::vector<double> deltas;
    int wins = 0;
    std::size_t row = 0;
    std::vector<LearningCurve> list;
    for (const auto& [trial, c] : curves) {
      const auto ttt = time_to_threshold(c, cfg.threshold);
      const auto& b = base_ttt[trial];
      if (ttt && (!b || *ttt < *b)) ++wins;
      if (ttt && b) deltas.push_back(static_cast<double>(*ttt - *b));
      metrics << run.method << ',' << trial << ',' << js[row++] << ','
              << (ttt ? std::to_string(*ttt) : "NA") << ',' << c.sunk_cost_timesteps << ','
              << (ttt ? 1 : 0) << '\n';
      list.push_back(c);
      if (!c.points.empty())
        x_max = std::max(x_max, c.sunk_cost_timesteps + c.points.back().cumulative_timesteps);
    }
    const Aggregate j = mean_sd(j_values);
    summary << run.method << ',' << curves.size() << ','
            << (j_values.empty() ? "NA" : format_number(j.mean)) << ','
            << (j_values.size() < 2 ? "NA" : format_number(j.sd)) << ','
            << (deltas.empty() ? "NA" : format_number(mean_sd(deltas).mean)) << ',' << wins
            << '\n';
    all.emplace_back(run.method, std::move(list));
  }

  constexpr int kGrid = 100;
  std::vector<long> grid;
  for (int i = 0; i < kGrid; ++i)
    grid.push_back(static_cast<long>(std::llround(static_cast<double>(x_max) * i / (kGrid - 1))));
  for (const auto& [method, curves] : all) {
    if (curves.empty()) continue;
    std::vector<Aggregate> agg;
    if (curves.size() >= 2) {
      agg = aggregate_trials(curves, grid);
    } else {
      for (long x : grid) agg.push_back({curve_value_at(curves.front(), x), 0.0});
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
      aggregate << method << ',' << grid[i] << ',' << format_number(agg[i].mean) << ','
                << format_number(agg[i].sd) << '\n';
  }

  fs::create_directories(out);
  write_text(out / "metrics.csv", metrics.str());
  write_text(out / "summary.csv", summary.str());
  write_text(out / "aggregate.csv", aggregate.str());
}

void cmd_plot(const ExperimentConfig& cfg, const std::vector<fs::path>& csvs,
              const std::optional<fs::path>& trajectory, const fs::path& out) {
  const Stamp stamp = stamp_of(cfg);
  std::vector<CurveSeries> series;
  for (const auto& path : csvs) {
    const CurveFile f = read_curve_csv(path);
    CurveSeries s{f.method, {}};
    for (auto& [trial, c] : f.target_curves()) s.trials.push_back(std::move(c));
    series.push_back(std::move(s));
  }
  fs::create_directories(out);
  write_text(out / "learning_curves.svg", render_learning_curves(series, stamp));
  if (trajectory) write_text(out / "replay.svg", render_replay(read_json(*trajectory), stamp));
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curriculum optimization in a low-fidelity grid and transfer to a continuous arena",
               "acute"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out_dir;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config (JSON)")
        ->required()
        ->envname("ACUTE_CONFIG");
    sub->add_option("--seed", seed, "Override the master seed")->envname("ACUTE_SEED");
    sub->add_option("--jobs", jobs, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->envname("ACUTE_JOBS");
    sub->add_option("--out", out_dir, "Output directory (default: config output_dir)")
        ->envname("ACUTE_OUT");
  };

  auto* optimize = app.add_subcommand("optimize-lf", "Beam-search the LF curriculum");
  common(optimize);
  auto* run_hf = app.add_subcommand("run-hf", "Learn the mapped curriculum in HF");
  common(run_hf);
  std::string manifest;
  bool trajectory = false;
  run_hf->add_option("--manifest", manifest, "Manifest from optimize-lf (AC mode)");
  run_hf->add_flag("--trajectory", trajectory, "Record one rollout of trial 0's final policy");
  auto* eval = app.add_subcommand("eval", "Transfer metrics against a baseline run");
  common(eval);
  std::vector<std::string> run_dirs;
  std::string baseline;
  eval->add_option("runs", run_dirs, "Run directories")->required();
  eval->add_option("--baseline", baseline, "Baseline run directory")->required();
  auto* plot = app.add_subcommand("plot", "SVG learning curves and replays");
  common(plot);
  std::vector<std::string> csvs;
  std::string replay;
  plot->add_option("csvs", csvs, "curve.csv files")->required();
  plot->add_option("--trajectory", replay, "trajectory.json to render");
  auto* validate = app.add_subcommand("validate-config", "Check a config and print its hash");
  common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return 2;
  }
  const fs::path dest = cfg.output_dir;

  try {
    if (*validate) {
      out << "ok config_hash=" << config_hash(cfg) << " seed=" << cfg.seed << '\n';
    } else if (*optimize) {
      out << cmd_optimize_lf(cfg, jobs, dest).string() << '\n';
    } else if (*run_hf) {
      cmd_run_hf(cfg, manifest.empty() ? std::nullopt : std::optional<fs::path>(manifest), jobs,
                 dest, trajectory);
      out << (dest / "curve.csv").string() << '\n';
    } else if (*eval) {
      std::vector<fs::path> dirs(run_dirs.begin(), run_dirs.end());
      cmd_eval(cfg, dirs, baseline, dest);
      out << (dest / "metrics.csv").string() << '\n';
    } else if (*plot) {
      std::vector<fs::path> files(csvs.begin(), csvs.end());
      cmd_plot(cfg, files, replay.empty() ? std::nullopt : std::optional<fs::path>(replay), dest);
      out << (dest / "learning_curves.svg").string() << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace acute
