#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "acute/rng.hpp"

namespace acute {

enum class Fidelity { Low, High };

enum class EnvVariant { Plain, Fire };

// Physical objects that can occupy the arena.
enum class ItemKind : int { Tree = 0, Rock = 1, CraftingTable = 2, Fire = 3 };

enum class GoalCategory : int { Navigate = 0, Break = 1, Craft = 2 };

struct NavigateGoal {
  ItemKind item = ItemKind::Tree;
  auto operator<=>(const NavigateGoal&) const = default;
};

struct BreakGoal {
  int trees = 0;
  int rocks = 0;
  auto operator<=>(const BreakGoal&) const = default;
};

struct CraftGoal {
  auto operator<=>(const CraftGoal&) const = default;
};

using GoalSpec = std::variant<NavigateGoal, BreakGoal, CraftGoal>;

GoalCategory category_of(const GoalSpec& goal);
std::string to_string(ItemKind kind);
std::string to_string(GoalCategory category);
std::string to_string(const GoalSpec& goal);

// Footprint radius of every body (agent and objects) in the continuous arena.
inline constexpr double kBodyRadius = 0.15;

// Crafting recipe for the stone axe.
inline constexpr int kRecipeWood = 2;
inline constexpr int kRecipeStone = 1;

// Numeric parametric variables, in the fixed order used by mappings and
// noise models. The goal is not numeric and never enters these vectors.
enum class Param : std::size_t {
  Width = 0,
  Height,
  Trees,
  Rocks,
  CraftingTables,
  WoodInv,
  StoneInv,
  Fires,
};
inline constexpr std::size_t kNumParams = 8;

const char* param_key(Param p);
inline constexpr bool is_length(Param p) {
  return p == Param::Width || p == Param::Height;
}

using ParamVector = std::array<double, kNumParams>;

// One task, in either fidelity: LF lengths are cell counts, HF lengths are
// meters.
struct TaskParams {
  double width = 0.0;
  double height = 0.0;
  int trees_env = 0;
  int rocks_env = 0;
  int crafting_tables = 0;
  int wood_inv = 0;
  int stone_inv = 0;
  int fires_env = 0;
  GoalSpec goal = CraftGoal{};

  auto operator<=>(const TaskParams&) const = default;
  bool operator==(const TaskParams&) const = default;

  double get(Param p) const;
  // Counts are rounded to the nearest integer, ties to even.
  void set(Param p, double value);

  ParamVector numeric() const;
  int object_count() const {
    return trees_env + rocks_env + crafting_tables + fires_env;
  }
};

std::string to_string(const TaskParams& p);

struct Interval {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Interval&) const = default;
};

struct ParamRanges {
  std::array<Interval, kNumParams> bounds{};
  std::vector<GoalCategory> goals;

  const Interval& operator[](Param p) const {
    return bounds[static_cast<std::size_t>(p)];
  }
  Interval& operator[](Param p) { return bounds[static_cast<std::size_t>(p)]; }
};

// Throws ValidationError when some min > max or a count range is negative.
void validate(const ParamRanges& ranges);
bool contains(const ParamRanges& ranges, const TaskParams& p);

// Source-task ranges whose maxima are the given target's values.
ParamRanges ranges_below(const TaskParams& target, EnvVariant variant);
ParamRanges default_lf_ranges(EnvVariant variant);

bool feasible(const TaskParams& p, Fidelity fidelity = Fidelity::Low);

TaskParams target_task_params(EnvVariant variant, int fire_count = 1);

// Uniform draw of every numeric parameter from
// [max(range min, minimum required by goal), range max].
TaskParams random_source_params(Rng& rng, const ParamRanges& ranges,
                                const GoalSpec& goal);

// Picks a concrete goal of the given category (navigate item, break subset)
// along with the environment it needs.
TaskParams random_task_for_category(Rng& rng, const ParamRanges& ranges,
                                    GoalCategory category);

// True when the category can be satisfied inside the ranges.
bool category_achievable(const ParamRanges& ranges, GoalCategory category);

const std::array<GoalCategory, 3>& goal_categories();

}  // namespace acute
