#include "acute/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "acute/errors.hpp"

namespace acute {

Mlp::Mlp(std::size_t input, std::size_t hidden, std::size_t output)
    : input_(input),
      hidden_(hidden),
      output_(output),
      params_(hidden * input + hidden + output * hidden + output, 0.0) {}

Mlp Mlp::random(std::size_t input, std::size_t hidden, std::size_t output, Rng& rng) {
  Mlp m(input, hidden, output);
  const double a1 = std::sqrt(6.0 / static_cast<double>(input + hidden));
  const double a2 = 0.1 * std::sqrt(6.0 / static_cast<double>(hidden + output));
  std::uniform_real_distribution<double> u1(-a1, a1);
  std::uniform_real_distribution<double> u2(-a2, a2);
  for (std::size_t i = 0; i < hidden * input; ++i) m.params_[m.w1() + i] = u1(rng);
  for (std::size_t i = 0; i < output * hidden; ++i) m.params_[m.w2() + i] = u2(rng);
  return m;
}

void Mlp::forward(std::span<const double> x, std::span<double> hidden,
                  std::span<double> out) const {
  if (x.size() != input_)
    throw ShapeMismatch("input has " + std::to_string(x.size()) + " entries, network expects " +
                        std::to_string(input_));
  const double* w = params_.data() + w1();
  const double* b = params_.data() + b1();
  for (std::size_t h = 0; h < hidden_; ++h) {
    const double* row = w + h * input_;
    double z = b[h];
    for (std::size_t i = 0; i < input_; ++i) z += row[i] * x[i];
    hidden[h] = std::tanh(z);
  }
  const double* v = params_.data() + w2();
  const double* c = params_.data() + b2();
  for (std::size_t o = 0; o < output_; ++o) {
    const double* row = v + o * hidden_;
    double z = c[o];
    for (std::size_t h = 0; h < hidden_; ++h) z += row[h] * hidden[h];
    out[o] = z;
  }
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  std::vector<double> hidden(hidden_);
  std::vector<double> out(output_);
  forward(x, hidden, out);
  return out;
}

void Mlp::backward(std::span<const double> x, std::span<const double> hidden,
                   std::span<const double> dout, std::span<double> grad) const {
  double* gw2 = grad.data() + w2();
  double* gb2 = grad.data() + b2();
  const double* v = params_.data() + w2();
  // Reused per call; networks here are small.
  std::vector<double> dz(hidden_, 0.0);
  for (std::size_t o = 0; o < output_; ++o) {
    const double g = dout[o];
    if (g == 0.0) continue;
    gb2[o] += g;
    double* grow = gw2 + o * hidden_;
    const double* vrow = v + o * hidden_;
    for (std::size_t h = 0; h < hidden_; ++h) {
      grow[h] += g * hidden[h];
      dz[h] += g * vrow[h];
    }
  }
  double* gw1 = grad.data() + w1();
  double* gb1 = grad.data() + b1();
  for (std::size_t h = 0; h < hidden_; ++h) {
    const double d = dz[h] * (1.0 - hidden[h] * hidden[h]);
    if (d == 0.0) continue;
    gb1[h] += d;
    double* grow = gw1 + h * input_;
    for (std::size_t i = 0; i < input_; ++i) grow[i] += d * x[i];
  }
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Adam::Adam(std::size_t n, double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

}  // namespace acute
