#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace acute {

struct CurvePoint {
  long cumulative_timesteps = 0;  // target-task steps through this episode
  double ret = 0.0;
  bool success = false;
};

// Target-task learning curve. Everything spent before the target task
// (curriculum search and source tasks) is carried as an x-axis offset.
struct LearningCurve {
  std::vector<CurvePoint> points;
  long sunk_cost_timesteps = 0;

  static LearningCurve from_episodes(const std::vector<double>& returns,
                                     const std::vector<int>& lengths,
                                     const std::vector<std::uint8_t>& successes, long sunk_cost);
  // Throws ValidationError when timesteps are not strictly increasing or the
  // sunk cost is negative.
  void validate() const;
};

// Mean per-episode return advantage of `method` over `baseline` across the
// first d target-task episodes. Throws InsufficientEpisodes.
double jumpstart(const LearningCurve& method, const LearningCurve& baseline, int d);

struct Threshold {
  enum class Mode { SuccessRate, MeanReturn };
  Mode mode = Mode::SuccessRate;
  double value = 0.85;
  int window = 100;
};

// First total timestep (sunk cost included) at which the trailing-window
// criterion holds; nullopt when never reached.
std::optional<long> time_to_threshold(const LearningCurve& curve, const Threshold& threshold);

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
};

// Value of one curve at total timestep x: the return of the last episode
// finished by x, or the curve's worst return before its first episode ends.
double curve_value_at(const LearningCurve& curve, long x);

// Per-checkpoint mean and sample SD across trials. Needs at least 2 curves.
std::vector<Aggregate> aggregate_trials(const std::vector<LearningCurve>& curves,
                                        const std::vector<long>& grid);

}  // namespace acute
