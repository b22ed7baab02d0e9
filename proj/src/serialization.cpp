#include "acute/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "acute/errors.hpp"

namespace acute {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + "." + key + ": missing");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) throw SchemaError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

double number_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number()) throw SchemaError(where + "." + key + ": expected a number");
  return v.get<double>();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw SchemaError(where + "." + it.key() + ": unknown key");
  }
}

}  // namespace

ItemKind item_kind_from_string(const std::string& s, const std::string& where) {
  for (ItemKind k : {ItemKind::Tree, ItemKind::Rock, ItemKind::CraftingTable, ItemKind::Fire})
    if (to_string(k) == s) return k;
  throw SchemaError(where + ": unknown item '" + s + "'");
}

GoalCategory goal_category_from_string(const std::string& s, const std::string& where) {
  for (GoalCategory c : goal_categories())
    if (to_string(c) == s) return c;
  throw SchemaError(where + ": unknown goal category '" + s + "'");
}

Json to_json(const GoalSpec& goal) {
  Json j;
  if (const auto* nav = std::get_if<NavigateGoal>(&goal)) {
    j["kind"] = "navigate";
    j["item"] = to_string(nav->item);
  } else if (const auto* brk = std::get_if<BreakGoal>(&goal)) {
    j["kind"] = "break";
    j["trees"] = brk->trees;
    j["rocks"] = brk->rocks;
  } else {
    j["kind"] = "craft";
  }
  return j;
}

GoalSpec goal_from_json(const Json& j, const std::string& where) {
  const Json& kind = field(j, "kind", where);
  if (!kind.is_string()) throw SchemaError(where + ".kind: expected a string");
  const auto k = kind.get<std::string>();
  if (k == "navigate") {
    reject_unknown(j, {"kind", "item"}, where);
    const Json& item = field(j, "item", where);
    if (!item.is_string()) throw SchemaError(where + ".item: expected a string");
    return NavigateGoal{item_kind_from_string(item.get<std::string>(), where + ".item")};
  }
  if (k == "break") {
    reject_unknown(j, {"kind", "trees", "rocks"}, where);
    return BreakGoal{int_field(j, "trees", where), int_field(j, "rocks", where)};
  }
  if (k == "craft") {
    reject_unknown(j, {"kind"}, where);
    return CraftGoal{};
  }
  throw SchemaError(where + ".kind: unknown goal kind '" + k + "'");
}

Json to_json(const TaskParams& p) {
  Json j;
  j["width"] = p.width;
  j["height"] = p.height;
  j["trees_env"] = p.trees_env;
  j["rocks_env"] = p.rocks_env;
  j["crafting_tables"] = p.crafting_tables;
  j["wood_inv"] = p.wood_inv;
  j["stone_inv"] = p.stone_inv;
  j["fires_env"] = p.fires_env;
  j["goal"] = to_json(p.goal);
  return j;
}

TaskParams task_params_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  reject_unknown(j,
                 {"width", "height", "trees_env", "rocks_env", "crafting_tables", "wood_inv",
                  "stone_inv", "fires_env", "goal"},
                 where);
  TaskParams p;
  p.width = number_field(j, "width", where);
  p.height = number_field(j, "height", where);
  p.trees_env = int_field(j, "trees_env", where);
  p.rocks_env = int_field(j, "rocks_env", where);
  p.crafting_tables = int_field(j, "crafting_tables", where);
  p.wood_inv = int_field(j, "wood_inv", where);
  p.stone_inv = int_field(j, "stone_inv", where);
  p.fires_env = j.contains("fires_env") ? int_field(j, "fires_env", where) : 0;
  p.goal = goal_from_json(field(j, "goal", where), where + ".goal");
  return p;
}

Json to_json(const ParamVector& v) {
  Json j = Json::object();
  for (std::size_t i = 0; i < kNumParams; ++i) j[param_key(static_cast<Param>(i))] = v[i];
  return j;
}

ParamVector param_vector_from_json(const Json& j, const std::string& where) {
  ParamVector v{};
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool found = false;
    for (std::size_t i = 0; i < kNumParams; ++i)
      if (it.key() == param_key(static_cast<Param>(i))) found = true;
    if (!found) throw SchemaError(where + "." + it.key() + ": unknown parameter");
  }
  for (std::size_t i = 0; i < kNumParams; ++i)
    v[i] = number_field(j, param_key(static_cast<Param>(i)), where);
  return v;
}

Json to_json(const ParamRanges& r) {
  Json j = Json::object();
  for (std::size_t i = 0; i < kNumParams; ++i)
    j[param_key(static_cast<Param>(i))] = Json::array({r.bounds[i].min, r.bounds[i].max});
  Json goals = Json::array();
  for (GoalCategory c : r.goals) goals.push_back(to_string(c));
  j["goals"] = goals;
  return j;
}

ParamRanges param_ranges_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  ParamRanges r;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "goals") continue;
    bool found = false;
    for (std::size_t i = 0; i < kNumParams; ++i)
      if (it.key() == param_key(static_cast<Param>(i))) found = true;
    if (!found) throw SchemaError(where + "." + it.key() + ": unknown parameter");
  }
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const char* key = param_key(static_cast<Param>(i));
    const Json& b = field(j, key, where);
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
      throw SchemaError(where + "." + key + ": expected [min, max]");
    r.bounds[i] = Interval{b[0].get<double>(), b[1].get<double>()};
  }
  const Json& goals = field(j, "goals", where);
  if (!goals.is_array()) throw SchemaError(where + ".goals: expected an array");
  for (std::size_t i = 0; i < goals.size(); ++i) {
    const std::string w = where + ".goals[" + std::to_string(i) + "]";
    if (!goals[i].is_string()) throw SchemaError(w + ": expected a string");
    r.goals.push_back(goal_category_from_string(goals[i].get<std::string>(), w));
  }
  return r;
}

Json to_json(const GridLayout& layout) {
  Json objects = Json::array();
  for (const auto& [cell, kind] : layout.objects)
    objects.push_back({{"kind", to_string(kind)}, {"x", cell.x}, {"y", cell.y}});
  return {{"fidelity", "low"},
          {"width", layout.width},
          {"height", layout.height},
          {"agent", {{"x", layout.agent.x}, {"y", layout.agent.y},
                     {"heading", static_cast<int>(layout.heading)}}},
          {"objects", objects}};
}

Json to_json(const PlanarLayout& layout) {
  Json objects = Json::array();
  for (const auto& b : layout.objects)
    objects.push_back({{"kind", to_string(b.kind)}, {"x", b.x}, {"y", b.y}});
  return {{"fidelity", "high"},
          {"width", layout.width},
          {"height", layout.height},
          {"agent", {{"x", layout.agent.x}, {"y", layout.agent.y},
                     {"theta", layout.agent.theta}}},
          {"objects", objects}};
}

void save_policy(const Mlp& policy, const std::filesystem::path& stem, const Stamp& stamp) {
  auto bin = stem;
  bin += ".bin";
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin.string());
  for (double v : policy.params()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes), 8);
  }
  auto header = stem;
  header += ".json";
  write_json(header, {{"format", "acute-policy/1"},
                      {"encoding", "float64-le"},
                      {"input", policy.input_dim()},
                      {"hidden", policy.hidden_dim()},
                      {"output", policy.output_dim()},
                      {"count", policy.size()},
                      {"config_hash", stamp.config_hash},
                      {"seed", stamp.seed}});
}

Mlp load_policy(const std::filesystem::path& stem) {
  auto header_path = stem;
  header_path += ".json";
  const Json h = read_json(header_path);
  const std::string where = header_path.string();
  if (!h.contains("format") || h["format"] != "acute-policy/1")
    throw SchemaError(where + ".format: expected acute-policy/1");
  const auto input = static_cast<std::size_t>(int_field(h, "input", where));
  const auto hidden = static_cast<std::size_t>(int_field(h, "hidden", where));
  const auto output = static_cast<std::size_t>(int_field(h, "output", where));
  const auto count = static_cast<std::size_t>(int_field(h, "count", where));
  Mlp policy(input, hidden, output);
  if (policy.size() != count) throw SchemaError(where + ".count: does not match the shape");

  auto bin = stem;
  bin += ".bin";
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + bin.string());
  auto params = policy.params();
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8))
      throw SchemaError(bin.string() + ": truncated at parameter " + std::to_string(i));
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    params[i] = std::bit_cast<double>(bits);
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw SchemaError(bin.string() + ": trailing bytes after " + std::to_string(count) +
                      " parameters");
  return policy;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace acute
