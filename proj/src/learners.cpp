#include "acute/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acute/errors.hpp"

namespace acute {

double epsilon_at(const LearnerConfig& cfg, int episode, int budget) {
  const double horizon = cfg.epsilon_decay_fraction * budget;
  if (horizon <= 0) return cfg.epsilon_end;
  const double frac = std::min(1.0, episode / horizon);
  return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

std::vector<double> softmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) z += (p[i] = std::exp(logits[i] - m));
  for (double& v : p) v /= z;
  return p;
}

namespace {

Action uniform_action(Rng& rng) {
  return static_cast<Action>(std::uniform_int_distribution<int>(0, kNumActions - 1)(rng));
}

Action sample_from(std::span<const double> probs, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<Action>(i);
  }
  return static_cast<Action>(probs.size() - 1);
}

Action argmax(std::span<const double> values) {
  return static_cast<Action>(std::max_element(values.begin(), values.end()) - values.begin());
}

void check_finite(std::span<const double> grad, const char* who) {
  if (!all_finite(grad)) throw NonFiniteGradient(std::string(who) + ": non-finite gradient entry");
}

}  // namespace

Action select_action(const Mlp& params, std::span<const double> obs, double epsilon,
                     Algorithm algorithm, Rng& rng) {
  if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon)
    return uniform_action(rng);
  const auto out = params.forward(obs);
  if (algorithm == Algorithm::Dqn) return argmax(out);
  return sample_from(softmax(out), rng);
}

// ---------------------------------------------------------------- REINFORCE

void Trajectory::push(std::span<const double> obs, Action a, double reward) {
  observations.insert(observations.end(), obs.begin(), obs.end());
  actions.push_back(a);
  rewards.push_back(reward);
}

void Trajectory::clear() {
  observations.clear();
  actions.clear();
  rewards.clear();
}

std::vector<double> returns_to_go(std::span<const double> rewards, double gamma) {
  std::vector<double> g(rewards.size());
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) g[i] = acc = rewards[i] + gamma * acc;
  return g;
}

std::vector<double> normalize_returns(std::vector<double> g) {
  if (g.empty()) return g;
  const double n = static_cast<double>(g.size());
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / n;
  double var = 0.0;
  for (double v : g) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  for (double& v : g) v = sd < 1e-8 ? v - mean : (v - mean) / sd;
  return g;
}

double reinforce_surrogate(const Mlp& params, const Trajectory& traj,
                           std::span<const double> weights) {
  std::vector<double> hidden(params.hidden_dim());
  std::vector<double> logits(params.output_dim());
  double total = 0.0;
  for (std::size_t t = 0; t < traj.length(); ++t) {
    params.forward(traj.obs(t), hidden, logits);
    const double m = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double l : logits) z += std::exp(l - m);
    const double log_p = logits[static_cast<std::size_t>(traj.actions[t])] - m - std::log(z);
    total += weights[t] * log_p;
  }
  return total;
}

std::vector<double> reinforce_gradient(const Mlp& params, const Trajectory& traj,
                                       std::span<const double> weights) {
  std::vector<double> grad(params.size(), 0.0);
  std::vector<double> hidden(params.hidden_dim());
  std::vector<double> logits(params.output_dim());
  std::vector<double> dlogits(params.output_dim());
  for (std::size_t t = 0; t < traj.length(); ++t) {
    if (weights[t] == 0.0) continue;
    params.forward(traj.obs(t), hidden, logits);
    const auto p = softmax(logits);
    // d log softmax(l)[a] / d l = onehot(a) - p
    for (std::size_t k = 0; k < p.size(); ++k) dlogits[k] = -weights[t] * p[k];
    dlogits[static_cast<std::size_t>(traj.actions[t])] += weights[t];
    params.backward(traj.obs(t), hidden, dlogits, grad);
  }
  return grad;
}

void reinforce_update(Mlp& params, Adam& optimizer, const Trajectory& traj, double gamma) {
  reinforce_update(params, optimizer, std::span<const Trajectory>(&traj, 1), gamma);
}

void reinforce_update(Mlp& params, Adam& optimizer, std::span<const Trajectory> trajs,
                      double gamma) {
  std::vector<double> pooled;
  for (const auto& traj : trajs) {
    const auto g = returns_to_go(traj.rewards, gamma);
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  if (pooled.empty()) return;
  const auto weights = normalize_returns(std::move(pooled));

  std::vector<double> grad(params.size(), 0.0);
  std::size_t offset = 0;
  for (const auto& traj : trajs) {
    const auto w = std::span<const double>(weights).subspan(offset, traj.length());
    const auto g = reinforce_gradient(params, traj, w);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
    offset += traj.length();
  }
  check_finite(grad, "reinforce_update");
  for (double& g : grad) g = -g;  // ascent
  optimizer.step(params.params(), grad);
}

// ---------------------------------------------------------------------- DQN

double td_target(const Mlp& target, const Transition& t, double gamma) {
  if (t.terminal || gamma == 0.0) return t.reward;
  const auto q_next = target.forward(t.next_obs);
  return t.reward + gamma * *std::max_element(q_next.begin(), q_next.end());
}

double dqn_loss(const Mlp& q, const Mlp& target, std::span<const Transition> batch, double gamma) {
  double loss = 0.0;
  for (const auto& t : batch) {
    const double y = td_target(target, t, gamma);
    const double e = q.forward(t.obs)[static_cast<std::size_t>(t.action)] - y;
    loss += e * e;
  }
  return loss / static_cast<double>(batch.size());
}

std::vector<double> dqn_gradient(const Mlp& q, const Mlp& target,
                                 std::span<const Transition> batch, double gamma) {
  std::vector<double> grad(q.size(), 0.0);
  std::vector<double> hidden(q.hidden_dim());
  std::vector<double> out(q.output_dim());
  std::vector<double> dout(q.output_dim(), 0.0);
  const double scale = 2.0 / static_cast<double>(batch.size());
  for (const auto& t : batch) {
    const double y = td_target(target, t, gamma);
    q.forward(t.obs, hidden, out);
    const auto a = static_cast<std::size_t>(t.action);
    std::fill(dout.begin(), dout.end(), 0.0);
    dout[a] = scale * (out[a] - y);
    q.backward(t.obs, hidden, dout, grad);
  }
  return grad;
}

void dqn_update(Mlp& q, Adam& optimizer, const Mlp& target, std::span<const Transition> batch,
                double gamma) {
  const auto grad = dqn_gradient(q, target, batch, gamma);
  check_finite(grad, "dqn_update");
  optimizer.step(q.params(), grad);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t obs_dim)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      obs_(capacity * obs_dim),
      next_(capacity * obs_dim),
      actions_(capacity),
      terminal_(capacity),
      rewards_(capacity) {}

void ReplayBuffer::add(std::span<const double> obs, Action a, double reward,
                       std::span<const double> next, bool terminal) {
  const std::size_t base = head_ * obs_dim_;
  std::copy(obs.begin(), obs.end(), obs_.begin() + static_cast<std::ptrdiff_t>(base));
  std::copy(next.begin(), next.end(), next_.begin() + static_cast<std::ptrdiff_t>(base));
  actions_[head_] = static_cast<std::uint8_t>(a);
  terminal_[head_] = terminal ? 1 : 0;
  rewards_[head_] = reward;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

void ReplayBuffer::sample(std::size_t n, Rng& rng, std::vector<Transition>& out) const {
  out.resize(n);
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  for (auto& t : out) {
    const std::size_t i = pick(rng);
    const auto first = static_cast<std::ptrdiff_t>(i * obs_dim_);
    const auto last = first + static_cast<std::ptrdiff_t>(obs_dim_);
    t.obs.assign(obs_.begin() + first, obs_.begin() + last);
    t.next_obs.assign(next_.begin() + first, next_.begin() + last);
    t.action = static_cast<Action>(actions_[i]);
    t.reward = rewards_[i];
    t.terminal = terminal_[i] != 0;
  }
}

// ------------------------------------------------------------------ learners

namespace {

class ReinforceLearner final : public Learner {
 public:
  ReinforceLearner(const LearnerConfig& cfg, const Mlp& init)
      : cfg_(cfg), policy_(init), optimizer_(init.size(), cfg.lr) {
    batch_.emplace_back(init.input_dim());
  }

  Action act(const Observation& obs, double epsilon, Rng& rng) override {
    return select_action(policy_, obs.values(), epsilon, Algorithm::Reinforce, rng);
  }

  void observe(const Observation& obs, Action a, double reward, const Observation&, bool,
               Rng&) override {
    batch_.back().push(obs.values(), a, reward);
  }

  void end_episode(Rng&) override {
    if (static_cast<int>(batch_.size()) < cfg_.episodes_per_update) {
      batch_.emplace_back(policy_.input_dim());
      return;
    }
    reinforce_update(policy_, optimizer_, batch_, cfg_.gamma);
    batch_.resize(1);
    batch_.front().clear();
  }

  const Mlp& policy() const override { return policy_; }

 private:
  LearnerConfig cfg_;
  Mlp policy_;
  Adam optimizer_;
  std::vector<Trajectory> batch_;
};

class DqnLearner final : public Learner {
 public:
  DqnLearner(const LearnerConfig& cfg, const Mlp& init)
      : cfg_(cfg),
        q_(init),
        target_(init),
        optimizer_(init.size(), cfg.lr),
        buffer_(static_cast<std::size_t>(cfg.replay_capacity), init.input_dim()) {}

  Action act(const Observation& obs, double epsilon, Rng& rng) override {
    return select_action(q_, obs.values(), epsilon, Algorithm::Dqn, rng);
  }

  void observe(const Observation& obs, Action a, double reward, const Observation& next,
               bool terminal, Rng& rng) override {
    buffer_.add(obs.values(), a, reward * cfg_.reward_scale, next.values(), terminal);
    ++steps_;
    const auto ready = static_cast<std::size_t>(std::max(cfg_.learning_starts, cfg_.batch_size));
    if (buffer_.size() >= ready && steps_ % cfg_.train_interval == 0) {
      buffer_.sample(static_cast<std::size_t>(cfg_.batch_size), rng, batch_);
      dqn_update(q_, optimizer_, target_, batch_, cfg_.gamma);
    }
    if (steps_ % cfg_.target_sync_interval == 0) target_ = q_;
  }

  void end_episode(Rng&) override {}

  const Mlp& policy() const override { return q_; }

 private:
  LearnerConfig cfg_;
  Mlp q_;
  Mlp target_;
  Adam optimizer_;
  ReplayBuffer buffer_;
  std::vector<Transition> batch_;
  long steps_ = 0;
};

}  // namespace

std::unique_ptr<Learner> make_learner(const LearnerConfig& cfg, const Mlp& init) {
  if (cfg.algorithm == Algorithm::Dqn) return std::make_unique<DqnLearner>(cfg, init);
  return std::make_unique<ReinforceLearner>(cfg, init);
}

Mlp init_policy(std::size_t obs_dim, const LearnerConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  return Mlp::random(obs_dim, static_cast<std::size_t>(cfg.hidden), kNumActions, rng);
}

}  // namespace acute
