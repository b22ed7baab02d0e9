#include "acute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "acute/errors.hpp"

namespace acute {

LearningCurve LearningCurve::from_episodes(const std::vector<double>& returns,
                                           const std::vector<int>& lengths,
                                           const std::vector<std::uint8_t>& successes,
                                           long sunk_cost) {
  LearningCurve c;
  c.sunk_cost_timesteps = sunk_cost;
  long t = 0;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    t += lengths[i];
    c.points.push_back(CurvePoint{t, returns[i], successes[i] != 0});
  }
  return c;
}

void LearningCurve::validate() const {
  if (sunk_cost_timesteps < 0) throw ValidationError("learning curve: negative sunk cost");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].cumulative_timesteps <= points[i - 1].cumulative_timesteps)
      throw ValidationError("learning curve: timesteps not strictly increasing at episode " +
                            std::to_string(i));
}

double jumpstart(const LearningCurve& method, const LearningCurve& baseline, int d) {
  if (d < 1) throw InsufficientEpisodes("jumpstart window must be >= 1");
  if (method.points.size() < static_cast<std::size_t>(d) ||
      baseline.points.size() < static_cast<std::size_t>(d))
    throw InsufficientEpisodes("jumpstart needs " + std::to_string(d) + " episodes, have " +
                               std::to_string(method.points.size()) + " and " +
                               std::to_string(baseline.points.size()));
  double sum = 0.0;
  for (int i = 0; i < d; ++i) sum += method.points[i].ret - baseline.points[i].ret;
  return sum / d;
}

std::optional<long> time_to_threshold(const LearningCurve& curve, const Threshold& threshold) {
  const int w = threshold.window;
  if (w < 1) return std::nullopt;
  double acc = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    acc += threshold.mode == Threshold::Mode::SuccessRate ? (p.success ? 1.0 : 0.0) : p.ret;
    if (i >= static_cast<std::size_t>(w)) {
      const auto& old = curve.points[i - static_cast<std::size_t>(w)];
      acc -= threshold.mode == Threshold::Mode::SuccessRate ? (old.success ? 1.0 : 0.0) : old.ret;
    }
    if (i + 1 >= static_cast<std::size_t>(w) && acc / w >= threshold.value)
      return curve.sunk_cost_timesteps + p.cumulative_timesteps;
  }
  return std::nullopt;
}

double curve_value_at(const LearningCurve& curve, long x) {
  if (curve.points.empty()) return 0.0;
  const long local = x - curve.sunk_cost_timesteps;
  // Last episode whose end lies at or before x.
  auto it = std::upper_bound(curve.points.begin(), curve.points.end(), local,
                             [](long v, const CurvePoint& p) { return v < p.cumulative_timesteps; });
  if (it == curve.points.begin()) {
    double worst = curve.points.front().ret;
    for (const auto& p : curve.points) worst = std::min(worst, p.ret);
    return worst;
  }
  return std::prev(it)->ret;
}

std::vector<Aggregate> aggregate_trials(const std::vector<LearningCurve>& curves,
                                        const std::vector<long>& grid) {
  if (curves.size() < 2) throw InsufficientEpisodes("aggregate_trials needs at least 2 curves");
  std::vector<Aggregate> out;
  out.reserve(grid.size());
  const double n = static_cast<double>(curves.size());
  for (long x : grid) {
    double sum = 0.0;
    std::vector<double> values;
    values.reserve(curves.size());
    for (const auto& c : curves) {
      values.push_back(curve_value_at(c, x));
      sum += values.back();
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    out.push_back(Aggregate{mean, std::sqrt(ss / (n - 1.0))});
  }
  return out;
}

}  // namespace acute
