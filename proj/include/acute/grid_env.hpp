#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acute/env.hpp"

namespace acute {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

// Heading in quarter turns counter-clockwise from +x.
enum class Heading : int { East = 0, North = 1, West = 2, South = 3 };

struct GridLayout {
  int width = 0;
  int height = 0;
  Cell agent;
  Heading heading = Heading::East;
  std::vector<std::pair<Cell, ItemKind>> objects;
};

// Low-fidelity crafting grid: one object per cell, moves of one cell, turns of
// a quarter, eight ego-centric beams at 45 degree increments.
class GridEnv final : public Environment {
 public:
  static constexpr int kBeams = 8;
  static constexpr int kEpisodeCap = 100;

  std::size_t obs_dim() const override { return observation_dim(kBeams); }
  int episode_cap() const override { return kEpisodeCap; }
  Fidelity fidelity() const override { return Fidelity::Low; }

  // The next reset() uses this layout instead of sampling one.
  void use_layout(GridLayout layout) { fixed_layout_ = std::move(layout); }

  Observation observe() const override;
  GridLayout layout() const;

  Cell agent() const { return agent_; }
  Heading heading() const { return heading_; }
  std::optional<ItemKind> object_at(Cell c) const;
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  int width() const { return width_; }
  int height() const { return height_; }

 protected:
  void place(const TaskParams& params, Rng& rng) override;
  Effect apply(Action action) override;
  bool reached(ItemKind kind) const override;

 private:
  static constexpr std::int8_t kEmpty = -1;

  Cell front() const;
  std::int8_t& at(Cell c) { return cells_[static_cast<std::size_t>(c.y * width_ + c.x)]; }
  std::int8_t at(Cell c) const { return cells_[static_cast<std::size_t>(c.y * width_ + c.x)]; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::int8_t> cells_;
  Cell agent_;
  Heading heading_ = Heading::East;
  std::optional<GridLayout> fixed_layout_;
};

}  // namespace acute
