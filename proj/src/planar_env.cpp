#include "acute/planar_env.hpp"

#include <cmath>
#include <limits>

#include "acute/errors.hpp"

namespace acute {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kContact = 2.0 * kBodyRadius;
constexpr int kTriesPerBody = 200;

// Smallest t >= 0 at which origin + t * dir enters the disc, if any.
std::optional<double> ray_disc(double ox, double oy, double dx, double dy, double cx, double cy,
                               double r) {
  const double lx = cx - ox;
  const double ly = cy - oy;
  const double tca = lx * dx + ly * dy;
  const double d2 = lx * lx + ly * ly - tca * tca;
  if (d2 > r * r) return std::nullopt;
  const double thc = std::sqrt(r * r - d2);
  const double t0 = tca - thc;
  const double t1 = tca + thc;
  if (t1 < 0) return std::nullopt;
  return t0 >= 0 ? t0 : 0.0;
}

double signed_bearing(double from_theta, double dx, double dy) {
  double e = std::atan2(dy, dx) - from_theta;
  e = std::remainder(e, kTwoPi);
  return e;
}

}  // namespace

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

void PlanarEnv::place(const TaskParams& params, Rng& rng) {
  if (fixed_layout_) {
    PlanarLayout l = std::move(*fixed_layout_);
    fixed_layout_.reset();
    width_ = l.width;
    height_ = l.height;
    agent_ = l.agent;
    agent_.theta = wrap_angle(agent_.theta);
    objects_ = std::move(l.objects);
    return;
  }

  width_ = params.width;
  height_ = params.height;
  if (width_ < kContact || height_ < kContact) throw PlacementFailure("arena smaller than a body");

  std::vector<ItemKind> kinds;
  kinds.insert(kinds.end(), static_cast<std::size_t>(params.trees_env), ItemKind::Tree);
  kinds.insert(kinds.end(), static_cast<std::size_t>(params.rocks_env), ItemKind::Rock);
  kinds.insert(kinds.end(), static_cast<std::size_t>(params.crafting_tables), ItemKind::CraftingTable);
  kinds.insert(kinds.end(), static_cast<std::size_t>(params.fires_env), ItemKind::Fire);

  std::uniform_real_distribution<double> ux(kBodyRadius, width_ - kBodyRadius);
  std::uniform_real_distribution<double> uy(kBodyRadius, height_ - kBodyRadius);
  std::uniform_real_distribution<double> uth(0.0, kTwoPi);

  std::vector<Body> placed;
  for (int layout = 0; layout < kMaxLayouts; ++layout) {
    placed.clear();
    bool ok = true;
    // Objects first, the agent last; every body keeps clear of the others.
    for (std::size_t i = 0; i <= kinds.size() && ok; ++i) {
      bool found = false;
      for (int t = 0; t < kTriesPerBody && !found; ++t) {
        const double x = ux(rng);
        const double y = uy(rng);
        found = true;
        for (const auto& b : placed)
          if (std::hypot(b.x - x, b.y - y) < kContact) {
            found = false;
            break;
          }
        if (found) placed.push_back(Body{i < kinds.size() ? kinds[i] : ItemKind::Tree, x, y});
      }
      ok = found;
    }
    if (!ok) continue;
    const Body agent = placed.back();
    placed.pop_back();
    objects_ = placed;
    agent_ = Pose{agent.x, agent.y, wrap_angle(uth(rng))};
    return;
  }
  throw PlacementFailure("no non-overlapping layout after " + std::to_string(kMaxLayouts) +
                         " attempts");
}

template <class Pred>
std::optional<std::size_t> PlanarEnv::interactable(Pred accepts) const {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const Body& b = objects_[i];
    if (!accepts(b.kind)) continue;
    const double dx = b.x - agent_.x;
    const double dy = b.y - agent_.y;
    const double d = std::hypot(dx, dy);
    if (d > kInteractReach) continue;
    if (std::abs(signed_bearing(agent_.theta, dx, dy)) > kBearingTolerance) continue;
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Environment::Effect PlanarEnv::apply(Action action) {
  Effect effect;
  switch (action) {
    case Action::Forward: {
      const double nx = agent_.x + kStride * std::cos(agent_.theta);
      const double ny = agent_.y + kStride * std::sin(agent_.theta);
      if (nx < kBodyRadius || ny < kBodyRadius || nx > width_ - kBodyRadius ||
          ny > height_ - kBodyRadius)
        break;
      bool blocked = false;
      bool fire = false;
      for (const auto& b : objects_) {
        if (std::hypot(b.x - nx, b.y - ny) >= kContact) continue;
        if (b.kind == ItemKind::Fire)
          fire = true;
        else
          blocked = true;
      }
      if (blocked) break;
      agent_.x = nx;
      agent_.y = ny;
      effect.touched_fire = fire;
      break;
    }
    case Action::RotateCW:
      agent_.theta = wrap_angle(agent_.theta - kTurn);
      break;
    case Action::RotateCCW:
      agent_.theta = wrap_angle(agent_.theta + kTurn);
      break;
    case Action::Break: {
      const auto idx = interactable(
          [](ItemKind k) { return k == ItemKind::Tree || k == ItemKind::Rock; });
      if (idx) {
        const ItemKind kind = objects_[*idx].kind;
        objects_.erase(objects_.begin() + static_cast<std::ptrdiff_t>(*idx));
        collect(kind);
        effect.broke = kind;
      }
      break;
    }
    case Action::Craft:
      if (interactable([](ItemKind k) { return k == ItemKind::CraftingTable; }))
        effect.crafted = try_craft();
      break;
  }
  return effect;
}

RayHit PlanarEnv::cast(double angle) const {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  RayHit hit{SensedKind::Wall, std::numeric_limits<double>::infinity()};
  if (dx > 1e-12) hit.distance = std::min(hit.distance, (width_ - agent_.x) / dx);
  if (dx < -1e-12) hit.distance = std::min(hit.distance, -agent_.x / dx);
  if (dy > 1e-12) hit.distance = std::min(hit.distance, (height_ - agent_.y) / dy);
  if (dy < -1e-12) hit.distance = std::min(hit.distance, -agent_.y / dy);
  for (const auto& b : objects_) {
    const auto t = ray_disc(agent_.x, agent_.y, dx, dy, b.x, b.y, kBodyRadius);
    if (t && *t < hit.distance) hit = RayHit{sensed_kind(b.kind), *t};
  }
  return hit;
}

Observation PlanarEnv::observe() const {
  Observation obs(kBeams);
  const double diagonal = std::hypot(width_, height_);
  for (int k = 0; k < kBeams; ++k) {
    const RayHit hit = cast(agent_.theta + k * std::numbers::pi / 10.0);
    obs.set_beam(k, hit.kind, std::min(1.0, hit.distance / diagonal));
  }
  fill_inventory(obs);
  return obs;
}

bool PlanarEnv::reached(ItemKind kind) const {
  const RayHit hit = cast(agent_.theta);
  return hit.kind == sensed_kind(kind) && hit.distance <= kNavigateReach;
}

PlanarLayout PlanarEnv::layout() const { return PlanarLayout{width_, height_, agent_, objects_}; }

}  // namespace acute
