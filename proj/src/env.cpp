#include "acute/env.hpp"

#include <algorithm>
#include <cmath>

#include "acute/errors.hpp"

namespace acute {

std::string to_string(Action a) {
  switch (a) {
    case Action::Forward: return "forward";
    case Action::RotateCW: return "rotate_cw";
    case Action::RotateCCW: return "rotate_ccw";
    case Action::Break: return "break";
    case Action::Craft: return "craft";
  }
  return "?";
}

SensedKind sensed_kind(ItemKind kind) {
  switch (kind) {
    case ItemKind::Tree: return SensedKind::Tree;
    case ItemKind::Rock: return SensedKind::Rock;
    case ItemKind::CraftingTable: return SensedKind::CraftingTable;
    case ItemKind::Fire: return SensedKind::Fire;
  }
  return SensedKind::Wall;
}

Observation::Observation(int beams) : beams_(beams), values_(observation_dim(beams), 0.0) {}

void Observation::set_beam(int beam, SensedKind kind, double normalized_distance) {
  const auto base = static_cast<std::size_t>(beam * kBeamStride);
  std::fill_n(values_.begin() + static_cast<std::ptrdiff_t>(base), kNumSensedKinds, 0.0);
  values_[base + static_cast<std::size_t>(kind)] = 1.0;
  values_[base + kNumSensedKinds] = normalized_distance;
}

SensedKind Observation::beam_kind(int beam) const {
  const auto base = static_cast<std::size_t>(beam * kBeamStride);
  for (int k = 0; k < kNumSensedKinds; ++k)
    if (values_[base + static_cast<std::size_t>(k)] == 1.0) return static_cast<SensedKind>(k);
  return SensedKind::Wall;
}

double Observation::beam_distance(int beam) const {
  return values_[static_cast<std::size_t>(beam * kBeamStride + kNumSensedKinds)];
}

void Observation::set_inventory(int wood, int stone) {
  values_[values_.size() - 2] = std::min(1.0, static_cast<double>(wood) / kRecipeWood);
  values_.back() = std::min(1.0, static_cast<double>(stone) / kRecipeStone);
}

void EpisodeLog::record(Action a, double reward) {
  actions.push_back(a);
  rewards.push_back(reward);
  total_return += reward;
  ++length;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double g = 0.0;
  for (auto it = rewards.rbegin(); it != rewards.rend(); ++it) g = *it + gamma * g;
  return g;
}

double discounted_return(const EpisodeLog& log, double gamma) {
  return discounted_return(log.rewards, gamma);
}

Observation Environment::reset(const TaskParams& params, Rng& rng) {
  params_ = params;
  inventory_ = Inventory{params.wood_inv, params.stone_inv, false};
  ledger_ = CraftingLedger{params.wood_inv, params.stone_inv, 0, 0, 0};
  steps_ = 0;
  terminated_ = false;
  started_ = false;
  place(params, rng);
  started_ = true;
  return observe();
}

StepOutcome Environment::step(Action action) {
  if (!started_) throw ProtocolViolation("step before reset");
  if (terminated_) throw ProtocolViolation("step after terminal state");

  ++steps_;
  const Effect effect = apply(action);

  StepOutcome out;
  out.reward = scheme_.step_penalty;
  if (effect.broke && scheme_.shaping_enabled) out.reward += scheme_.break_bonus;

  if (effect.touched_fire) {
    out.reward = scheme_.fire_penalty;
    out.terminated = true;
  } else if (goal_met()) {
    out.reward += scheme_.success_bonus;
    out.terminated = true;
    out.success = true;
  }
  if (steps_ >= episode_cap()) out.terminated = true;

  terminated_ = out.terminated;
  out.observation = observe();
  return out;
}

void Environment::collect(ItemKind kind) {
  if (kind == ItemKind::Tree) {
    ++inventory_.wood;
    ++ledger_.trees_broken;
  } else if (kind == ItemKind::Rock) {
    ++inventory_.stone;
    ++ledger_.rocks_broken;
  }
}

bool Environment::try_craft() {
  if (inventory_.wood < kRecipeWood || inventory_.stone < kRecipeStone) return false;
  inventory_.wood -= kRecipeWood;
  inventory_.stone -= kRecipeStone;
  inventory_.has_axe = true;
  ++ledger_.crafts;
  return true;
}

void Environment::fill_inventory(Observation& obs) const {
  obs.set_inventory(inventory_.wood, inventory_.stone);
}

bool Environment::goal_met() const {
  if (const auto* nav = std::get_if<NavigateGoal>(&params_.goal)) return reached(nav->item);
  if (const auto* brk = std::get_if<BreakGoal>(&params_.goal))
    return ledger_.trees_broken >= brk->trees && ledger_.rocks_broken >= brk->rocks;
  return inventory_.has_axe;
}

}  // namespace acute
