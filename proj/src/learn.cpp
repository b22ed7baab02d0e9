#include "acute/learn.hpp"

#include "acute/errors.hpp"

namespace acute {

void StopCriterion::validate() const {
  if (!(delta_g > 0.0 && delta_g <= 1.0)) throw ValidationError("delta_g must be in (0, 1]");
  if (window_s < 1) throw ValidationError("window_s must be >= 1");
  if (budget_b < window_s) throw ValidationError("budget_b must be >= window_s");
}

LearnResult learn(Environment& env, const TaskParams& task, const Mlp& init,
                  const StopCriterion& stop, const RewardScheme& scheme,
                  const LearnerConfig& cfg, Rng& rng) {
  stop.validate();
  if (init.input_dim() != env.obs_dim())
    throw ShapeMismatch("policy input " + std::to_string(init.input_dim()) +
                        " does not match observation size " + std::to_string(env.obs_dim()));

  env.set_reward_scheme(scheme);
  auto learner = make_learner(cfg, init);
  const int cap = env.episode_cap();

  LearnResult result;
  int window_successes = 0;
  for (int episode = 0; episode < stop.budget_b; ++episode) {
    const double epsilon = epsilon_at(cfg, episode, stop.budget_b);
    Observation obs = env.reset(task, rng);
    double total = 0.0;
    bool success = false;
    bool done = false;
    while (!done) {
      const Action a = learner->act(obs, epsilon, rng);
      StepOutcome out = env.step(a);
      // Hitting the step cap is a truncation, not a terminal state.
      const bool terminal = out.terminated && (out.success || env.steps_used() < cap);
      learner->observe(obs, a, out.reward, out.observation, terminal, rng);
      total += out.reward;
      success = out.success;
      done = out.terminated;
      obs = std::move(out.observation);
    }
    learner->end_episode(rng);

    result.success_history.push_back(success ? 1 : 0);
    result.return_history.push_back(total);
    result.length_history.push_back(env.steps_used());
    result.timesteps_used += env.steps_used();
    result.episodes_used = episode + 1;

    window_successes += success ? 1 : 0;
    if (result.episodes_used > stop.window_s)
      window_successes -= result.success_history[static_cast<std::size_t>(
          result.episodes_used - 1 - stop.window_s)];
    if (result.episodes_used >= stop.window_s &&
        static_cast<double>(window_successes) / stop.window_s >= stop.delta_g) {
      result.converged = true;
      break;
    }
  }
  result.final_policy = learner->policy();
  return result;
}

}  // namespace acute
