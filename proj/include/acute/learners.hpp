#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "acute/env.hpp"
#include "acute/mlp.hpp"
#include "acute/rng.hpp"

namespace acute {

enum class Algorithm { Reinforce, Dqn };

struct LearnerConfig {
  Algorithm algorithm = Algorithm::Reinforce;
  int hidden = 64;
  double lr = 1e-3;
  double gamma = 0.99;
  double epsilon_start = 0.3;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.6;  // of the episode budget

  // REINFORCE only: episodes pooled into one update. With 1 every episode
  // is normalized on its own.
  int episodes_per_update = 1;

  // DQN only.
  int replay_capacity = 100000;
  int batch_size = 64;
  int target_sync_interval = 1000;  // environment steps
  int learning_starts = 1000;       // stored transitions
  int train_interval = 4;           // environment steps per gradient step
  double reward_scale = 1.0;        // applied to rewards before TD targets
};

// Linear anneal from epsilon_start to epsilon_end over the first
// epsilon_decay_fraction * budget episodes, then flat.
double epsilon_at(const LearnerConfig& cfg, int episode, int budget);

std::vector<double> softmax(std::span<const double> logits);

// With probability epsilon a uniform action; otherwise a softmax sample
// (REINFORCE) or the greedy argmax, lowest index on ties (DQN).
Action select_action(const Mlp& params, std::span<const double> obs, double epsilon,
                     Algorithm algorithm, Rng& rng);

// ---------------------------------------------------------------- REINFORCE

struct Trajectory {
  std::size_t obs_dim = 0;
  std::vector<double> observations;  // length() x obs_dim
  std::vector<Action> actions;
  std::vector<double> rewards;

  explicit Trajectory(std::size_t dim = 0) : obs_dim(dim) {}
  std::size_t length() const { return actions.size(); }
  std::span<const double> obs(std::size_t t) const {
    return std::span<const double>(observations).subspan(t * obs_dim, obs_dim);
  }
  void push(std::span<const double> obs, Action a, double reward);
  void clear();
};

std::vector<double> returns_to_go(std::span<const double> rewards, double gamma);

// Standardizes to mean 0 / sd 1. When sd < 1e-8 only the mean is removed.
std::vector<double> normalize_returns(std::vector<double> g);

// Sum_t w_t * log pi(a_t | s_t).
double reinforce_surrogate(const Mlp& params, const Trajectory& traj,
                           std::span<const double> weights);
// Gradient of reinforce_surrogate with respect to the flat parameters.
std::vector<double> reinforce_gradient(const Mlp& params, const Trajectory& traj,
                                       std::span<const double> weights);

// One ascent step on the normalized-return surrogate. Throws NonFiniteGradient.
void reinforce_update(Mlp& params, Adam& optimizer, const Trajectory& traj, double gamma);

// One ascent step over several episodes whose returns-to-go are normalized
// jointly. A single trajectory gives exactly reinforce_update.
void reinforce_update(Mlp& params, Adam& optimizer, std::span<const Trajectory> trajs,
                      double gamma);

// ---------------------------------------------------------------------- DQN

struct Transition {
  std::vector<double> obs;
  Action action = Action::Forward;
  double reward = 0.0;
  std::vector<double> next_obs;
  bool terminal = false;
};

// r for terminal transitions, r + gamma * max_a' Q_target(s', a') otherwise.
double td_target(const Mlp& target, const Transition& t, double gamma);

// Mean over the batch of (Q(s, a) - y)^2.
double dqn_loss(const Mlp& q, const Mlp& target, std::span<const Transition> batch, double gamma);
std::vector<double> dqn_gradient(const Mlp& q, const Mlp& target,
                                 std::span<const Transition> batch, double gamma);

// One descent step on dqn_loss. Throws NonFiniteGradient.
void dqn_update(Mlp& q, Adam& optimizer, const Mlp& target, std::span<const Transition> batch,
                double gamma);

// Fixed-capacity ring of transitions stored in single precision.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim);

  void add(std::span<const double> obs, Action a, double reward, std::span<const double> next,
           bool terminal);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  // Uniform sample with replacement, written into `out`.
  void sample(std::size_t n, Rng& rng, std::vector<Transition>& out) const;

 private:
  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::vector<float> obs_, next_;
  std::vector<std::uint8_t> actions_, terminal_;
  std::vector<double> rewards_;
};

// ------------------------------------------------------------------ learners

// Online learner driven by learn(): one act/observe pair per environment step
// and one end_episode per episode.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Action act(const Observation& obs, double epsilon, Rng& rng) = 0;
  virtual void observe(const Observation& obs, Action a, double reward, const Observation& next,
                       bool terminal, Rng& rng) = 0;
  virtual void end_episode(Rng& rng) = 0;
  virtual const Mlp& policy() const = 0;
};

std::unique_ptr<Learner> make_learner(const LearnerConfig& cfg, const Mlp& init);

Mlp init_policy(std::size_t obs_dim, const LearnerConfig& cfg, std::uint64_t seed);

}  // namespace acute
