#include "acute/grid_env.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "acute/errors.hpp"

namespace acute {

namespace {

// Eight compass steps, counter-clockwise from +x in 45 degree increments.
constexpr std::array<Cell, 8> kSteps = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

}  // namespace

void GridEnv::place(const TaskParams& params, Rng& rng) {
  if (fixed_layout_) {
    GridLayout layout = std::move(*fixed_layout_);
    fixed_layout_.reset();
    width_ = layout.width;
    height_ = layout.height;
    cells_.assign(static_cast<std::size_t>(width_ * height_), kEmpty);
    agent_ = layout.agent;
    heading_ = layout.heading;
    for (const auto& [cell, kind] : layout.objects) {
      if (!in_bounds(cell) || cell == agent_ || at(cell) != kEmpty)
        throw PlacementFailure("invalid fixed layout");
      at(cell) = static_cast<std::int8_t>(kind);
    }
    return;
  }

  width_ = static_cast<int>(params.width);
  height_ = static_cast<int>(params.height);
  if (width_ < 1 || height_ < 1) throw PlacementFailure("empty grid");
  const int n_cells = width_ * height_;
  const int n_objects = params.object_count();
  if (n_objects + 1 > n_cells)
    throw PlacementFailure(std::to_string(n_objects) + " objects and the agent do not fit in " +
                           std::to_string(n_cells) + " cells");

  cells_.assign(static_cast<std::size_t>(n_cells), kEmpty);
  // Partial Fisher-Yates over cell indices gives distinct uniform cells.
  std::vector<int> order(static_cast<std::size_t>(n_cells));
  std::iota(order.begin(), order.end(), 0);
  const int n_pick = n_objects + 1;
  for (int i = 0; i < n_pick; ++i) {
    const int j = std::uniform_int_distribution<int>(i, n_cells - 1)(rng);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  auto cell_of = [&](int idx) {
    const int v = order[static_cast<std::size_t>(idx)];
    return Cell{v % width_, v / width_};
  };

  int next = 0;
  auto put = [&](ItemKind kind, int count) {
    for (int i = 0; i < count; ++i) at(cell_of(next++)) = static_cast<std::int8_t>(kind);
  };
  put(ItemKind::Tree, params.trees_env);
  put(ItemKind::Rock, params.rocks_env);
  put(ItemKind::CraftingTable, params.crafting_tables);
  put(ItemKind::Fire, params.fires_env);
  agent_ = cell_of(next);
  heading_ = static_cast<Heading>(std::uniform_int_distribution<int>(0, 3)(rng));
}

Cell GridEnv::front() const {
  const Cell d = kSteps[static_cast<std::size_t>(2 * static_cast<int>(heading_))];
  return {agent_.x + d.x, agent_.y + d.y};
}

std::optional<ItemKind> GridEnv::object_at(Cell c) const {
  if (!in_bounds(c) || at(c) == kEmpty) return std::nullopt;
  return static_cast<ItemKind>(at(c));
}

Environment::Effect GridEnv::apply(Action action) {
  Effect effect;
  const Cell ahead = front();
  const auto item = object_at(ahead);
  switch (action) {
    case Action::Forward:
      if (!in_bounds(ahead)) break;
      if (!item) {
        agent_ = ahead;
      } else if (*item == ItemKind::Fire) {
        agent_ = ahead;
        effect.touched_fire = true;
      }
      break;
    case Action::RotateCW:
      heading_ = static_cast<Heading>((static_cast<int>(heading_) + 3) % 4);
      break;
    case Action::RotateCCW:
      heading_ = static_cast<Heading>((static_cast<int>(heading_) + 1) % 4);
      break;
    case Action::Break:
      if (item && (*item == ItemKind::Tree || *item == ItemKind::Rock)) {
        at(ahead) = kEmpty;
        collect(*item);
        effect.broke = item;
      }
      break;
    case Action::Craft:
      if (item && *item == ItemKind::CraftingTable) effect.crafted = try_craft();
      break;
  }
  return effect;
}

bool GridEnv::reached(ItemKind kind) const {
  const auto item = object_at(front());
  return item && *item == kind;
}

Observation GridEnv::observe() const {
  Observation obs(kBeams);
  const double diagonal = std::hypot(width_, height_);
  for (int k = 0; k < kBeams; ++k) {
    const Cell d = kSteps[static_cast<std::size_t>((2 * static_cast<int>(heading_) + k) % 8)];
    const double step_len = (d.x != 0 && d.y != 0) ? std::sqrt(2.0) : 1.0;
    Cell c = agent_;
    for (int s = 1;; ++s) {
      c = {c.x + d.x, c.y + d.y};
      if (!in_bounds(c)) {
        obs.set_beam(k, SensedKind::Wall, std::min(1.0, s * step_len / diagonal));
        break;
      }
      if (at(c) != kEmpty) {
        obs.set_beam(k, sensed_kind(static_cast<ItemKind>(at(c))), std::min(1.0, s * step_len / diagonal));
        break;
      }
    }
  }
  fill_inventory(obs);
  return obs;
}

GridLayout GridEnv::layout() const {
  GridLayout l{width_, height_, agent_, heading_, {}};
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (at(Cell{x, y}) != kEmpty) l.objects.push_back({Cell{x, y}, static_cast<ItemKind>(at(Cell{x, y}))});
  return l;
}

}  // namespace acute
