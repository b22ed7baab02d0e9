#include "acute/config.hpp"

#include <cstdio>
#include <fstream>

#include "acute/errors.hpp"

namespace acute {

namespace {

using Path = std::string;

[[noreturn]] void fail(const Path& where, const std::string& rule) {
  throw ConfigError(where + ": " + rule);
}

void check_keys(const Json& j, std::initializer_list<const char*> known, const Path& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(where + "." + it.key(), "unknown key");
  }
}

template <class T>
void read(const Json& j, const char* key, T& out, const Path& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  const Path p = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!it->is_boolean()) fail(p, "expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) fail(p, "expected an integer");
    if constexpr (std::is_unsigned_v<T>)
      if (it->is_number_integer() && !it->is_number_unsigned()) fail(p, "must be >= 0");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!it->is_number()) fail(p, "expected a number");
  } else {
    if (!it->is_string()) fail(p, "expected a string");
  }
  out = it->get<T>();
}

EnvVariant parse_variant(const std::string& s, const Path& where) {
  if (s == "plain") return EnvVariant::Plain;
  if (s == "fire") return EnvVariant::Fire;
  fail(where, "must be \"plain\" or \"fire\"");
}

std::string variant_name(EnvVariant v) { return v == EnvVariant::Fire ? "fire" : "plain"; }

CurriculumMode parse_mode(const std::string& s, const Path& where) {
  for (auto m : {CurriculumMode::AC, CurriculumMode::HC, CurriculumMode::Scratch})
    if (to_string(m) == s) return m;
  fail(where, "must be \"ac\", \"hc\" or \"scratch\"");
}

Algorithm parse_algorithm(const std::string& s, const Path& where) {
  if (s == "reinforce") return Algorithm::Reinforce;
  if (s == "dqn") return Algorithm::Dqn;
  fail(where, "must be \"reinforce\" or \"dqn\"");
}

std::string algorithm_name(Algorithm a) { return a == Algorithm::Dqn ? "dqn" : "reinforce"; }

void parse_stop(const Json& j, StopCriterion& s, const Path& where) {
  check_keys(j, {"delta_g", "window_s", "budget_b"}, where);
  read(j, "delta_g", s.delta_g, where);
  read(j, "window_s", s.window_s, where);
  read(j, "budget_b", s.budget_b, where);
}

Json stop_json(const StopCriterion& s) {
  return {{"delta_g", s.delta_g}, {"window_s", s.window_s}, {"budget_b", s.budget_b}};
}

void parse_learner(const Json& j, LearnerConfig& l, const Path& where) {
  check_keys(j,
             {"algorithm", "hidden", "lr", "gamma", "epsilon_start", "epsilon_end",
              "epsilon_decay_fraction", "episodes_per_update", "replay_capacity", "batch_size", "target_sync_interval",
              "learning_starts", "train_interval", "reward_scale"},
             where);
  std::string algo = algorithm_name(l.algorithm);
  read(j, "algorithm", algo, where);
  l.algorithm = parse_algorithm(algo, where + ".algorithm");
  read(j, "hidden", l.hidden, where);
  read(j, "lr", l.lr, where);
  read(j, "gamma", l.gamma, where);
  read(j, "epsilon_start", l.epsilon_start, where);
  read(j, "epsilon_end", l.epsilon_end, where);
  read(j, "epsilon_decay_fraction", l.epsilon_decay_fraction, where);
  read(j, "episodes_per_update", l.episodes_per_update, where);
  read(j, "replay_capacity", l.replay_capacity, where);
  read(j, "batch_size", l.batch_size, where);
  read(j, "target_sync_interval", l.target_sync_interval, where);
  read(j, "learning_starts", l.learning_starts, where);
  read(j, "train_interval", l.train_interval, where);
  read(j, "reward_scale", l.reward_scale, where);
}

Json learner_json(const LearnerConfig& l) {
  return {{"algorithm", algorithm_name(l.algorithm)},
          {"hidden", l.hidden},
          {"lr", l.lr},
          {"gamma", l.gamma},
          {"epsilon_start", l.epsilon_start},
          {"epsilon_end", l.epsilon_end},
          {"epsilon_decay_fraction", l.epsilon_decay_fraction},
          {"episodes_per_update", l.episodes_per_update},
          {"replay_capacity", l.replay_capacity},
          {"batch_size", l.batch_size},
          {"target_sync_interval", l.target_sync_interval},
          {"learning_starts", l.learning_starts},
          {"train_interval", l.train_interval},
          {"reward_scale", l.reward_scale}};
}

void validate_learner(const LearnerConfig& l, const Path& where) {
  if (l.hidden < 1) fail(where + ".hidden", "must be >= 1");
  if (!(l.lr > 0)) fail(where + ".lr", "must be > 0");
  if (!(l.gamma >= 0 && l.gamma <= 1)) fail(where + ".gamma", "must lie in [0, 1]");
  if (!(l.epsilon_start >= 0 && l.epsilon_start <= 1))
    fail(where + ".epsilon_start", "must lie in [0, 1]");
  if (!(l.epsilon_end >= 0 && l.epsilon_end <= 1))
    fail(where + ".epsilon_end", "must lie in [0, 1]");
  if (!(l.epsilon_decay_fraction >= 0 && l.epsilon_decay_fraction <= 1))
    fail(where + ".epsilon_decay_fraction", "must lie in [0, 1]");
  if (l.episodes_per_update < 1) fail(where + ".episodes_per_update", "must be >= 1");
  if (l.replay_capacity < 1) fail(where + ".replay_capacity", "must be >= 1");
  if (l.batch_size < 1) fail(where + ".batch_size", "must be >= 1");
  if (l.batch_size > l.replay_capacity)
    fail(where + ".batch_size", "must not exceed replay_capacity");
  if (l.target_sync_interval < 1) fail(where + ".target_sync_interval", "must be >= 1");
  if (l.learning_starts < 0) fail(where + ".learning_starts", "must be >= 0");
  if (l.train_interval < 1) fail(where + ".train_interval", "must be >= 1");
  if (!(l.reward_scale > 0)) fail(where + ".reward_scale", "must be > 0");
}

template <class F>
void rethrow_as_config(const Path& where, F&& f) {
  try {
    f();
  } catch (const SchemaError& e) {
    throw ConfigError(e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

// For validators whose messages start with the offending field name.
template <class F>
void rethrow_as_field(const Path& where, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    throw ConfigError(where + "." + e.what());
  }
}

}  // namespace

ExperimentConfig default_config(EnvVariant variant) {
  ExperimentConfig cfg;
  cfg.variant = variant;
  const TaskParams lf = target_task_params(variant, cfg.fire_count);
  const AffineMap map = AffineMap::standard(ranges_below(lf, variant));
  cfg.map_scale = map.scale;
  cfg.map_offset = map.offset;
  cfg.hf_target = forward(map, lf);
  return cfg;
}

TaskParams ExperimentConfig::lf_target() const { return setup().lf_target(); }

AcuteSetup ExperimentConfig::setup() const {
  AcuteSetup s;
  s.hf_target = hf_target;
  s.map.scale = map_scale;
  s.map.offset = map_offset;
  TaskParams lf = inverse(s.map, hf_target);
  s.lf_ranges = lf_ranges ? *lf_ranges : ranges_below(lf, variant);
  s.map.lf_ranges = s.lf_ranges;
  s.map.hf_ranges = map_ranges(map_scale, map_offset, s.lf_ranges);
  if (noise) s.noise = NoiseModel::from_ranges(s.map.hf_ranges, noise_max_rejects);
  s.beam = beam;
  s.stop_lf = stop_lf;
  s.stop_hf = stop_hf;
  s.lf_learner = lf_learner;
  s.hf_learner = hf_learner;
  return s;
}

void ExperimentConfig::validate() const {
  const Path root = "config";
  if (fire_count < 0) fail(root + ".environment.fire_count", "must be >= 0");
  if (mode == CurriculumMode::HC && hc_path.empty())
    fail(root + ".hc_path", "required when mode is \"hc\"");
  if (trials < 1) fail(root + ".trials", "must be >= 1");
  if (noise_max_rejects < 1) fail(root + ".mapping.max_rejects", "must be >= 1");
  if (jumpstart_episodes < 1) fail(root + ".metrics.jumpstart_episodes", "must be >= 1");
  if (threshold.window < 1) fail(root + ".metrics.threshold.window", "must be >= 1");
  if (variant == EnvVariant::Plain && hf_target.fires_env != 0)
    fail(root + ".hf_target.fires_env", "must be 0 in the plain variant");
  for (std::size_t i = 0; i < kNumParams; ++i)
    if (map_scale[i] == 0.0)
      fail(root + ".mapping.scale." + param_key(static_cast<Param>(i)),
           "must be non-zero for the map to be invertible");
  rethrow_as_field(root + ".beam", [&] { beam.validate(); });
  rethrow_as_field(root + ".stop.lf", [&] { stop_lf.validate(); });
  rethrow_as_field(root + ".stop.hf", [&] { stop_hf.validate(); });
  validate_learner(lf_learner, root + ".learner.lf");
  validate_learner(hf_learner, root + ".learner.hf");
  if (!feasible(hf_target, Fidelity::High))
    fail(root + ".hf_target", "infeasible in the continuous arena");
  rethrow_as_config(root + ".mapping", [&] {
    const AcuteSetup s = setup();
    const TaskParams lf = s.lf_target();
    if (!feasible(lf, Fidelity::Low))
      throw ValidationError("LF target {" + to_string(lf) + "} is infeasible");
    acute::validate(s.lf_ranges);
    if (!contains(s.lf_ranges, lf))
      throw ValidationError("lf_ranges do not contain the LF target {" + to_string(lf) + "}");
  });
}

ExperimentConfig parse_config(const Json& j) {
  const Path root = "config";
  check_keys(j,
             {"label", "environment", "mode", "hc_path", "hf_target", "mapping", "lf_ranges",
              "beam", "stop", "learner", "trials", "seed", "output_dir", "metrics"},
             root);

  EnvVariant variant = EnvVariant::Plain;
  int fire_count = 1;
  if (auto it = j.find("environment"); it != j.end()) {
    check_keys(*it, {"variant", "fire_count"}, root + ".environment");
    std::string v = "plain";
    read(*it, "variant", v, root + ".environment");
    variant = parse_variant(v, root + ".environment.variant");
    read(*it, "fire_count", fire_count, root + ".environment");
  }
  ExperimentConfig cfg = default_config(variant);
  if (fire_count != cfg.fire_count) {
    if (fire_count < 0) fail(root + ".environment.fire_count", "must be >= 0");
    cfg.fire_count = fire_count;
    const TaskParams lf = target_task_params(variant, fire_count);
    cfg.hf_target = forward(AffineMap::standard(ranges_below(lf, variant)), lf);
  }

  std::string mode = to_string(cfg.mode);
  read(j, "mode", mode, root);
  cfg.mode = parse_mode(mode, root + ".mode");
  read(j, "label", cfg.label, root);
  read(j, "hc_path", cfg.hc_path, root);
  read(j, "trials", cfg.trials, root);
  read(j, "seed", cfg.seed, root);
  read(j, "output_dir", cfg.output_dir, root);

  rethrow_as_config(root, [&] {
    if (auto it = j.find("hf_target"); it != j.end())
      cfg.hf_target = task_params_from_json(*it, root + ".hf_target");
    if (auto it = j.find("lf_ranges"); it != j.end())
      cfg.lf_ranges = param_ranges_from_json(*it, root + ".lf_ranges");
  });

  if (auto it = j.find("mapping"); it != j.end()) {
    const Path w = root + ".mapping";
    check_keys(*it, {"scale", "offset", "noise", "max_rejects"}, w);
    rethrow_as_config(w, [&] {
      if (it->contains("scale")) cfg.map_scale = param_vector_from_json((*it)["scale"], w + ".scale");
      if (it->contains("offset"))
        cfg.map_offset = param_vector_from_json((*it)["offset"], w + ".offset");
    });
    read(*it, "noise", cfg.noise, w);
    read(*it, "max_rejects", cfg.noise_max_rejects, w);
  }

  if (auto it = j.find("beam"); it != j.end()) {
    const Path w = root + ".beam";
    check_keys(*it, {"width_W", "branch_N", "length_U"}, w);
    read(*it, "width_W", cfg.beam.width_W, w);
    read(*it, "branch_N", cfg.beam.branch_N, w);
    read(*it, "length_U", cfg.beam.length_U, w);
  }

  if (auto it = j.find("stop"); it != j.end()) {
    const Path w = root + ".stop";
    check_keys(*it, {"lf", "hf"}, w);
    if (it->contains("lf")) parse_stop((*it)["lf"], cfg.stop_lf, w + ".lf");
    if (it->contains("hf")) parse_stop((*it)["hf"], cfg.stop_hf, w + ".hf");
  }

  if (auto it = j.find("learner"); it != j.end()) {
    const Path w = root + ".learner";
    check_keys(*it, {"lf", "hf"}, w);
    if (it->contains("lf")) parse_learner((*it)["lf"], cfg.lf_learner, w + ".lf");
    if (it->contains("hf")) parse_learner((*it)["hf"], cfg.hf_learner, w + ".hf");
  }

  if (auto it = j.find("metrics"); it != j.end()) {
    const Path w = root + ".metrics";
    check_keys(*it, {"jumpstart_episodes", "threshold"}, w);
    read(*it, "jumpstart_episodes", cfg.jumpstart_episodes, w);
    if (auto t = it->find("threshold"); t != it->end()) {
      const Path tw = w + ".threshold";
      check_keys(*t, {"mode", "value", "window"}, tw);
      std::string m = "success_rate";
      read(*t, "mode", m, tw);
      if (m == "success_rate")
        cfg.threshold.mode = Threshold::Mode::SuccessRate;
      else if (m == "mean_return")
        cfg.threshold.mode = Threshold::Mode::MeanReturn;
      else
        fail(tw + ".mode", "must be \"success_rate\" or \"mean_return\"");
      read(*t, "value", cfg.threshold.value, tw);
      read(*t, "window", cfg.threshold.window, tw);
    }
  }

  if (cfg.label.empty()) cfg.label = to_string(cfg.mode);
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["label"] = cfg.label.empty() ? to_string(cfg.mode) : cfg.label;
  j["environment"] = {{"variant", variant_name(cfg.variant)}, {"fire_count", cfg.fire_count}};
  j["mode"] = to_string(cfg.mode);
  j["hc_path"] = cfg.hc_path;
  j["hf_target"] = to_json(cfg.hf_target);
  j["mapping"] = {{"scale", to_json(cfg.map_scale)},
                  {"offset", to_json(cfg.map_offset)},
                  {"noise", cfg.noise},
                  {"max_rejects", cfg.noise_max_rejects}};
  if (cfg.lf_ranges) j["lf_ranges"] = to_json(*cfg.lf_ranges);
  j["beam"] = {{"width_W", cfg.beam.width_W},
               {"branch_N", cfg.beam.branch_N},
               {"length_U", cfg.beam.length_U}};
  j["stop"] = {{"lf", stop_json(cfg.stop_lf)}, {"hf", stop_json(cfg.stop_hf)}};
  j["learner"] = {{"lf", learner_json(cfg.lf_learner)}, {"hf", learner_json(cfg.hf_learner)}};
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["metrics"] = {
      {"jumpstart_episodes", cfg.jumpstart_episodes},
      {"threshold",
       {{"mode", cfg.threshold.mode == Threshold::Mode::SuccessRate ? "success_rate"
                                                                     : "mean_return"},
        {"value", cfg.threshold.value},
        {"window", cfg.threshold.window}}}};
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  Json j = to_json(cfg);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace acute
