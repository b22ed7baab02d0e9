#pragma once

#include <string>
#include <vector>

#include "acute/metrics.hpp"
#include "acute/serialization.hpp"

namespace acute {

struct CurveSeries {
  std::string method;
  std::vector<LearningCurve> trials;
};

// Mean +- SD band of the per-episode return for every method, sampled on
// `grid_points` checkpoints from the method's smallest sunk cost to the end of
// the longest run. The x axis starts at 0 timesteps.
std::string render_learning_curves(const std::vector<CurveSeries>& series, const Stamp& stamp,
                                   int grid_points = 100);

// Top-down view of a recorded episode: arena, objects and the agent's path.
// Throws SchemaError when the trajectory JSON is malformed.
std::string render_replay(const Json& trajectory, const Stamp& stamp);

}  // namespace acute
