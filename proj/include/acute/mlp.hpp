#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "acute/rng.hpp"

namespace acute {

// input -> hidden (tanh) -> output, stored as one flat parameter vector:
// [W1 (hidden x input, row-major) | b1 | W2 (output x hidden) | b2].
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::size_t input, std::size_t hidden, std::size_t output);

  // Xavier-uniform hidden layer, output layer shrunk so initial logits are
  // near zero. Biases start at zero.
  static Mlp random(std::size_t input, std::size_t hidden, std::size_t output, Rng& rng);

  std::size_t input_dim() const { return input_; }
  std::size_t hidden_dim() const { return hidden_; }
  std::size_t output_dim() const { return output_; }
  std::size_t size() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  // Writes tanh activations into `hidden` and outputs into `out`.
  // Throws ShapeMismatch when x does not have input_dim() entries.
  void forward(std::span<const double> x, std::span<double> hidden, std::span<double> out) const;
  std::vector<double> forward(std::span<const double> x) const;

  // Accumulates dL/dparams into grad given dL/dout at input x, reusing the
  // hidden activations computed by forward().
  void backward(std::span<const double> x, std::span<const double> hidden,
                std::span<const double> dout, std::span<double> grad) const;

  bool operator==(const Mlp&) const = default;

 private:
  std::size_t w1() const { return 0; }
  std::size_t b1() const { return hidden_ * input_; }
  std::size_t w2() const { return b1() + hidden_; }
  std::size_t b2() const { return w2() + output_ * hidden_; }

  std::size_t input_ = 0;
  std::size_t hidden_ = 0;
  std::size_t output_ = 0;
  std::vector<double> params_;
};

// Deep value copy; the clone shares nothing with the original.
inline Mlp clone_policy(const Mlp& p) { return p; }

bool all_finite(std::span<const double> v);

class Adam {
 public:
  explicit Adam(std::size_t n, double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8);

  // Descends along `grad` (a loss gradient).
  void step(std::span<double> params, std::span<const double> grad);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace acute
