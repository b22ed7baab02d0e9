#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acute/params.hpp"
#include "acute/rng.hpp"

namespace acute {

enum class Action : int { Forward = 0, RotateCW, RotateCCW, Break, Craft };
inline constexpr int kNumActions = 5;
std::string to_string(Action a);

// What a sensor beam can report.
enum class SensedKind : int { Tree = 0, Rock, CraftingTable, Wall, Fire };
inline constexpr int kNumSensedKinds = 5;
inline constexpr int kBeamStride = kNumSensedKinds + 1;  // one-hot + distance

SensedKind sensed_kind(ItemKind kind);

constexpr std::size_t observation_dim(int beams) {
  return static_cast<std::size_t>(beams * kBeamStride + 2);
}

// Flat sensor vector: per beam a one-hot over SensedKind followed by the
// normalized hit distance, then the two inventory scalars.
class Observation {
 public:
  Observation() = default;
  explicit Observation(int beams);

  int beam_count() const { return beams_; }
  void set_beam(int beam, SensedKind kind, double normalized_distance);
  SensedKind beam_kind(int beam) const;
  double beam_distance(int beam) const;

  // Inventory is normalized by the recipe and capped at 1.
  void set_inventory(int wood, int stone);
  double wood() const { return values_[values_.size() - 2]; }
  double stone() const { return values_.back(); }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  int beams_ = 0;
  std::vector<double> values_;
};

struct StepOutcome {
  Observation observation;
  double reward = 0.0;
  bool terminated = false;
  bool success = false;
};

struct RewardScheme {
  double step_penalty = -1.0;
  double success_bonus = 1000.0;
  double break_bonus = 50.0;
  double fire_penalty = -1000.0;
  bool shaping_enabled = false;

  static RewardScheme source() {
    RewardScheme s;
    s.shaping_enabled = true;
    return s;
  }
  static RewardScheme target() { return RewardScheme{}; }
};

struct EpisodeLog {
  std::vector<Action> actions;
  std::vector<double> rewards;
  double total_return = 0.0;
  int length = 0;
  bool success = false;

  void record(Action a, double reward);
};

double discounted_return(std::span<const double> rewards, double gamma);
double discounted_return(const EpisodeLog& log, double gamma);

struct Inventory {
  int wood = 0;
  int stone = 0;
  bool has_axe = false;
};

// Counters the invariant suites check against.
struct CraftingLedger {
  int initial_wood = 0;
  int initial_stone = 0;
  int trees_broken = 0;
  int rocks_broken = 0;
  int crafts = 0;
};

// Common episode protocol and crafting rules for both fidelities. Derived
// environments supply placement, kinematics and sensing.
class Environment {
 public:
  virtual ~Environment() = default;

  Observation reset(const TaskParams& params, Rng& rng);
  // Throws ProtocolViolation before reset or after termination.
  StepOutcome step(Action action);

  virtual std::size_t obs_dim() const = 0;
  virtual int episode_cap() const = 0;
  virtual Fidelity fidelity() const = 0;

  void set_reward_scheme(const RewardScheme& scheme) { scheme_ = scheme; }
  const RewardScheme& reward_scheme() const { return scheme_; }

  const TaskParams& params() const { return params_; }
  const Inventory& inventory() const { return inventory_; }
  const CraftingLedger& ledger() const { return ledger_; }
  int steps_used() const { return steps_; }
  bool active() const { return started_ && !terminated_; }

  virtual Observation observe() const = 0;

 protected:
  struct Effect {
    std::optional<ItemKind> broke;
    bool crafted = false;
    bool touched_fire = false;
  };

  virtual void place(const TaskParams& params, Rng& rng) = 0;
  virtual Effect apply(Action action) = 0;
  // Navigation goal predicate: the item kind is directly ahead within reach.
  virtual bool reached(ItemKind kind) const = 0;

  void collect(ItemKind kind);
  bool try_craft();
  void fill_inventory(Observation& obs) const;

 private:
  bool goal_met() const;

  RewardScheme scheme_;
  TaskParams params_;
  Inventory inventory_;
  CraftingLedger ledger_;
  int steps_ = 0;
  bool started_ = false;
  bool terminated_ = false;
};

}  // namespace acute
