#pragma once

#include <cstdint>
#include <vector>

#include "acute/env.hpp"
#include "acute/learners.hpp"
#include "acute/mlp.hpp"

namespace acute {

// Success-rate stopping rule over a trailing window, with an episode budget.
struct StopCriterion {
  double delta_g = 0.85;
  int window_s = 100;
  int budget_b = 5000;

  // Throws ValidationError naming the violated rule.
  void validate() const;
};

struct LearnResult {
  int episodes_used = 0;
  long timesteps_used = 0;
  Mlp final_policy;
  std::vector<std::uint8_t> success_history;
  std::vector<double> return_history;
  std::vector<int> length_history;
  bool converged = false;
};

// Runs episodes of `task` from `init` until the trailing window_s success rate
// reaches delta_g or budget_b episodes elapse. Epsilon restarts its schedule
// on every call.
LearnResult learn(Environment& env, const TaskParams& task, const Mlp& init,
                  const StopCriterion& stop, const RewardScheme& scheme,
                  const LearnerConfig& cfg, Rng& rng);

}  // namespace acute
