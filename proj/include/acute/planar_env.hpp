#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "acute/env.hpp"

namespace acute {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians in [0, 2pi)
};

struct Body {
  ItemKind kind = ItemKind::Tree;
  double x = 0.0;
  double y = 0.0;
};

struct PlanarLayout {
  double width = 0.0;
  double height = 0.0;
  Pose agent;
  std::vector<Body> objects;
};

struct RayHit {
  SensedKind kind = SensedKind::Wall;
  double distance = 0.0;  // meters from the agent center
};

// High-fidelity crafting arena: continuous positions, disc-shaped bodies of
// radius kBodyRadius, 20 ego-centric beams at pi/10 increments.
class PlanarEnv final : public Environment {
 public:
  static constexpr int kBeams = 20;
  static constexpr int kEpisodeCap = 600;
  static constexpr double kStride = 0.25;
  static constexpr double kTurn = std::numbers::pi / 9.0;
  // A blocked straight approach always ends within this center distance
  // (contact 2r plus one stride), so every object is interactable.
  static constexpr double kInteractReach = 2 * kBodyRadius + kStride;
  static constexpr double kBearingTolerance = std::numbers::pi / 9.0;
  static constexpr double kNavigateReach = 0.5;
  static constexpr int kMaxLayouts = 10000;

  std::size_t obs_dim() const override { return observation_dim(kBeams); }
  int episode_cap() const override { return kEpisodeCap; }
  Fidelity fidelity() const override { return Fidelity::High; }

  void use_layout(PlanarLayout layout) { fixed_layout_ = std::move(layout); }

  Observation observe() const override;
  RayHit cast(double angle) const;
  PlanarLayout layout() const;

  const Pose& agent() const { return agent_; }
  const std::vector<Body>& objects() const { return objects_; }
  double width() const { return width_; }
  double height() const { return height_; }

 protected:
  void place(const TaskParams& params, Rng& rng) override;
  Effect apply(Action action) override;
  bool reached(ItemKind kind) const override;

 private:
  // Index of the nearest object of an accepted kind within reach and bearing.
  template <class Pred>
  std::optional<std::size_t> interactable(Pred accepts) const;

  double width_ = 0.0;
  double height_ = 0.0;
  Pose agent_;
  std::vector<Body> objects_;
  std::optional<PlanarLayout> fixed_layout_;
};

double wrap_angle(double theta);

}  // namespace acute
