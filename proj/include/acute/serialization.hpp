#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "acute/beam_search.hpp"
#include "acute/grid_env.hpp"
#include "acute/mapping.hpp"
#include "acute/mlp.hpp"
#include "acute/params.hpp"
#include "acute/planar_env.hpp"

namespace acute {

using Json = nlohmann::json;

// Every parse function throws SchemaError with a message starting at `where`.

Json to_json(const GoalSpec& goal);
GoalSpec goal_from_json(const Json& j, const std::string& where);

Json to_json(const TaskParams& p);
TaskParams task_params_from_json(const Json& j, const std::string& where);

Json to_json(const ParamVector& v);
ParamVector param_vector_from_json(const Json& j, const std::string& where);

Json to_json(const ParamRanges& r);
ParamRanges param_ranges_from_json(const Json& j, const std::string& where);

Json to_json(const GridLayout& layout);
Json to_json(const PlanarLayout& layout);

ItemKind item_kind_from_string(const std::string& s, const std::string& where);
GoalCategory goal_category_from_string(const std::string& s, const std::string& where);

// Provenance stamped into every artifact.
struct Stamp {
  std::string config_hash;
  std::uint64_t seed = 0;
};

// Raw little-endian float64 parameters in `stem`.bin plus a JSON shape
// header in `stem`.json. Loading reproduces the parameters bit for bit.
void save_policy(const Mlp& policy, const std::filesystem::path& stem, const Stamp& stamp);
Mlp load_policy(const std::filesystem::path& stem);

// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace acute
