#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "acute/metrics.hpp"
#include "acute/pipeline.hpp"
#include "acute/serialization.hpp"

namespace acute {

inline constexpr const char* kCurveSchema = "acute-curve/1";
inline constexpr const char* kMetricsSchema = "acute-metrics/1";

struct CurveRow {
  int trial = 0;
  int task_index = 0;
  int episode = 0;  // 0-based within the task
  long cumulative_timesteps = 0;  // sunk cost included
  double ret = 0.0;
  bool success = false;
};

struct CurveFile {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string method;
  std::vector<CurveRow> rows;

  // Target-task curve of every trial, keyed by trial index. The target is the
  // highest task index; its sunk cost is the total before its first episode.
  std::map<int, LearningCurve> target_curves() const;
};

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// Every row of every HF task of the given trials.
std::vector<CurveRow> curve_rows(const std::vector<TrialResult>& trials);

std::string write_curve_csv(const std::vector<CurveRow>& rows, const Stamp& stamp,
                            const std::string& method);

// Throws SchemaError naming the file and line.
CurveFile read_curve_csv(const std::filesystem::path& path);

}  // namespace acute
