#include "acute/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "acute/errors.hpp"

namespace acute {

namespace {

constexpr int kMaxSourceResamples = 1000;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};

int round_count(double v) { return static_cast<int>(std::nearbyint(v)); }

int draw_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

int int_lo(const Interval& iv) { return static_cast<int>(std::ceil(iv.min)); }
int int_hi(const Interval& iv) { return static_cast<int>(std::floor(iv.max)); }

// Minimum environment counts needed by the goal, ignoring inventory.
struct Minimums {
  int trees = 0;
  int rocks = 0;
  int tables = 0;
};

Minimums goal_minimums(const GoalSpec& goal) {
  return std::visit(
      Overloaded{
          [](const NavigateGoal& g) {
            Minimums m;
            if (g.item == ItemKind::Tree) m.trees = 1;
            if (g.item == ItemKind::Rock) m.rocks = 1;
            if (g.item == ItemKind::CraftingTable) m.tables = 1;
            return m;
          },
          [](const BreakGoal& g) { return Minimums{g.trees, g.rocks, 0}; },
          [](const CraftGoal&) { return Minimums{0, 0, 1}; },
      },
      goal);
}

bool fits_arena(const TaskParams& p, Fidelity fidelity) {
  if (fidelity == Fidelity::Low) {
    if (p.width != std::floor(p.width) || p.height != std::floor(p.height))
      return false;
    if (p.width < 1 || p.height < 1) return false;
    return p.object_count() + 1 <= p.width * p.height;
  }
  if (p.width < 2 * kBodyRadius || p.height < 2 * kBodyRadius) return false;
  const double footprint = std::numbers::pi * kBodyRadius * kBodyRadius;
  return (p.object_count() + 1) * footprint < p.width * p.height;
}

}  // namespace

GoalCategory category_of(const GoalSpec& goal) {
  return static_cast<GoalCategory>(goal.index());
}

std::string to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::Tree: return "tree";
    case ItemKind::Rock: return "rock";
    case ItemKind::CraftingTable: return "crafting_table";
    case ItemKind::Fire: return "fire";
  }
  return "?";
}

std::string to_string(GoalCategory category) {
  switch (category) {
    case GoalCategory::Navigate: return "navigate";
    case GoalCategory::Break: return "break";
    case GoalCategory::Craft: return "craft";
  }
  return "?";
}

std::string to_string(const GoalSpec& goal) {
  return std::visit(
      Overloaded{
          [](const NavigateGoal& g) { return "navigate(" + to_string(g.item) + ")"; },
          [](const BreakGoal& g) {
            return "break(" + std::to_string(g.trees) + "," + std::to_string(g.rocks) + ")";
          },
          [](const CraftGoal&) { return std::string("craft"); },
      },
      goal);
}

const char* param_key(Param p) {
  switch (p) {
    case Param::Width: return "width";
    case Param::Height: return "height";
    case Param::Trees: return "trees_env";
    case Param::Rocks: return "rocks_env";
    case Param::CraftingTables: return "crafting_tables";
    case Param::WoodInv: return "wood_inv";
    case Param::StoneInv: return "stone_inv";
    case Param::Fires: return "fires_env";
  }
  return "?";
}

double TaskParams::get(Param p) const {
  switch (p) {
    case Param::Width: return width;
    case Param::Height: return height;
    case Param::Trees: return trees_env;
    case Param::Rocks: return rocks_env;
    case Param::CraftingTables: return crafting_tables;
    case Param::WoodInv: return wood_inv;
    case Param::StoneInv: return stone_inv;
    case Param::Fires: return fires_env;
  }
  return 0.0;
}

void TaskParams::set(Param p, double value) {
  switch (p) {
    case Param::Width: width = value; break;
    case Param::Height: height = value; break;
    case Param::Trees: trees_env = round_count(value); break;
    case Param::Rocks: rocks_env = round_count(value); break;
    case Param::CraftingTables: crafting_tables = round_count(value); break;
    case Param::WoodInv: wood_inv = round_count(value); break;
    case Param::StoneInv: stone_inv = round_count(value); break;
    case Param::Fires: fires_env = round_count(value); break;
  }
}

ParamVector TaskParams::numeric() const {
  ParamVector v{};
  for (std::size_t i = 0; i < kNumParams; ++i) v[i] = get(static_cast<Param>(i));
  return v;
}

std::string to_string(const TaskParams& p) {
  std::ostringstream os;
  os << p.width << "x" << p.height << " trees=" << p.trees_env
     << " rocks=" << p.rocks_env << " tables=" << p.crafting_tables
     << " inv=" << p.wood_inv << "/" << p.stone_inv << " fires=" << p.fires_env
     << " goal=" << to_string(p.goal);
  return os.str();
}

void validate(const ParamRanges& ranges) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const auto& iv = ranges.bounds[i];
    const char* key = param_key(static_cast<Param>(i));
    if (!(iv.min <= iv.max))
      throw ValidationError(std::string("range ") + key + ": min > max");
    if (iv.min < 0) throw ValidationError(std::string("range ") + key + ": negative min");
  }
  if (ranges[Param::CraftingTables].max > 1)
    throw ValidationError("range crafting_tables: max must be <= 1");
  if (ranges.goals.empty()) throw ValidationError("range goals: empty goal set");
}

bool contains(const ParamRanges& ranges, const TaskParams& p) {
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const double v = p.get(static_cast<Param>(i));
    if (v < ranges.bounds[i].min || v > ranges.bounds[i].max) return false;
  }
  return std::find(ranges.goals.begin(), ranges.goals.end(), category_of(p.goal)) !=
         ranges.goals.end();
}

ParamRanges ranges_below(const TaskParams& target, EnvVariant variant) {
  ParamRanges r;
  r[Param::Width] = {std::min(4.0, target.width), target.width};
  r[Param::Height] = {std::min(4.0, target.height), target.height};
  r[Param::Trees] = {0, static_cast<double>(target.trees_env)};
  r[Param::Rocks] = {0, static_cast<double>(target.rocks_env)};
  r[Param::CraftingTables] = {0, 1};
  r[Param::WoodInv] = {0, kRecipeWood};
  r[Param::StoneInv] = {0, kRecipeStone};
  r[Param::Fires] = {0, variant == EnvVariant::Fire ? std::max(2.0, 1.0 * target.fires_env) : 0.0};
  r.goals.assign(goal_categories().begin(), goal_categories().end());
  return r;
}

ParamRanges default_lf_ranges(EnvVariant variant) {
  return ranges_below(target_task_params(EnvVariant::Plain), variant);
}

bool feasible(const TaskParams& p, Fidelity fidelity) {
  if (p.trees_env < 0 || p.rocks_env < 0 || p.wood_inv < 0 || p.stone_inv < 0 ||
      p.fires_env < 0)
    return false;
  if (p.crafting_tables < 0 || p.crafting_tables > 1) return false;
  if (!(p.width > 0) || !(p.height > 0)) return false;
  if (!fits_arena(p, fidelity)) return false;

  return std::visit(
      Overloaded{
          [&](const NavigateGoal& g) {
            switch (g.item) {
              case ItemKind::Tree: return p.trees_env >= 1;
              case ItemKind::Rock: return p.rocks_env >= 1;
              case ItemKind::CraftingTable: return p.crafting_tables == 1;
              case ItemKind::Fire: return false;
            }
            return false;
          },
          [&](const BreakGoal& g) {
            if (g.trees < 0 || g.rocks < 0 || (g.trees == 0 && g.rocks == 0)) return false;
            return p.trees_env >= g.trees && p.rocks_env >= g.rocks;
          },
          [&](const CraftGoal&) {
            return p.crafting_tables == 1 && p.wood_inv + p.trees_env >= kRecipeWood &&
                   p.stone_inv + p.rocks_env >= kRecipeStone;
          },
      },
      p.goal);
}

TaskParams target_task_params(EnvVariant variant, int fire_count) {
  TaskParams p;
  p.width = 10;
  p.height = 10;
  p.trees_env = 4;
  p.rocks_env = 2;
  p.crafting_tables = 1;
  p.fires_env = variant == EnvVariant::Fire ? fire_count : 0;
  p.goal = CraftGoal{};
  return p;
}

TaskParams random_source_params(Rng& rng, const ParamRanges& ranges, const GoalSpec& goal) {
  validate(ranges);
  const Minimums need = goal_minimums(goal);
  const bool craft = std::holds_alternative<CraftGoal>(goal);

  for (int attempt = 0; attempt < kMaxSourceResamples; ++attempt) {
    TaskParams p;
    p.goal = goal;
    p.width = draw_int(rng, int_lo(ranges[Param::Width]), int_hi(ranges[Param::Width]));
    p.height = draw_int(rng, int_lo(ranges[Param::Height]), int_hi(ranges[Param::Height]));
    p.wood_inv = draw_int(rng, int_lo(ranges[Param::WoodInv]), int_hi(ranges[Param::WoodInv]));
    p.stone_inv = draw_int(rng, int_lo(ranges[Param::StoneInv]), int_hi(ranges[Param::StoneInv]));

    int tree_min = std::max(int_lo(ranges[Param::Trees]), need.trees);
    int rock_min = std::max(int_lo(ranges[Param::Rocks]), need.rocks);
    if (craft) {
      tree_min = std::max(tree_min, kRecipeWood - p.wood_inv);
      rock_min = std::max(rock_min, kRecipeStone - p.stone_inv);
    }
    const int table_min = std::max(int_lo(ranges[Param::CraftingTables]), need.tables);
    const int tree_max = int_hi(ranges[Param::Trees]);
    const int rock_max = int_hi(ranges[Param::Rocks]);
    const int table_max = int_hi(ranges[Param::CraftingTables]);
    if (tree_min > tree_max || rock_min > rock_max || table_min > table_max) continue;

    p.trees_env = draw_int(rng, tree_min, tree_max);
    p.rocks_env = draw_int(rng, rock_min, rock_max);
    p.crafting_tables = draw_int(rng, table_min, table_max);
    p.fires_env = draw_int(rng, int_lo(ranges[Param::Fires]), int_hi(ranges[Param::Fires]));
    if (feasible(p, Fidelity::Low)) return p;
  }
  throw InfeasibleRanges("no feasible " + to_string(goal) + " task within " +
                         std::to_string(kMaxSourceResamples) + " resamples");
}

TaskParams random_task_for_category(Rng& rng, const ParamRanges& ranges, GoalCategory category) {
  switch (category) {
    case GoalCategory::Navigate: {
      std::vector<ItemKind> kinds;
      if (ranges[Param::Trees].max >= 1) kinds.push_back(ItemKind::Tree);
      if (ranges[Param::Rocks].max >= 1) kinds.push_back(ItemKind::Rock);
      if (ranges[Param::CraftingTables].max >= 1) kinds.push_back(ItemKind::CraftingTable);
      if (kinds.empty()) throw InfeasibleRanges("no navigable item kind within ranges");
      const auto k = kinds[draw_int(rng, 0, static_cast<int>(kinds.size()) - 1)];
      return random_source_params(rng, ranges, NavigateGoal{k});
    }
    case GoalCategory::Break: {
      // Environment first, then a subset of what is present.
      TaskParams p = random_source_params(rng, ranges, NavigateGoal{ItemKind::Tree});
      BreakGoal g;
      g.trees = draw_int(rng, 1, p.trees_env);
      g.rocks = draw_int(rng, 0, p.rocks_env);
      p.goal = g;
      return p;
    }
    case GoalCategory::Craft:
      return random_source_params(rng, ranges, CraftGoal{});
  }
  throw InfeasibleRanges("unknown goal category");
}

bool category_achievable(const ParamRanges& ranges, GoalCategory category) {
  const bool fits = ranges[Param::Width].max * ranges[Param::Height].max >= 2;
  if (!fits) return false;
  switch (category) {
    case GoalCategory::Navigate:
      return ranges[Param::Trees].max >= 1 || ranges[Param::Rocks].max >= 1 ||
             ranges[Param::CraftingTables].max >= 1;
    case GoalCategory::Break:
      return ranges[Param::Trees].max >= 1;
    case GoalCategory::Craft:
      return ranges[Param::CraftingTables].max >= 1 &&
             ranges[Param::Trees].max + ranges[Param::WoodInv].max >= kRecipeWood &&
             ranges[Param::Rocks].max + ranges[Param::StoneInv].max >= kRecipeStone;
  }
  return false;
}

const std::array<GoalCategory, 3>& goal_categories() {
  static const std::array<GoalCategory, 3> kCategories = {
      GoalCategory::Navigate, GoalCategory::Break, GoalCategory::Craft};
  return kCategories;
}

}  // namespace acute
