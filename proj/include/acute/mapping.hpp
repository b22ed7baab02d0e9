#pragma once

#include <optional>

#include "acute/params.hpp"
#include "acute/rng.hpp"

namespace acute {

// Per-parameter affine map from LF to HF parametric variables:
// hf_i = scale_i * lf_i + offset_i. Goals pass through unchanged.
struct AffineMap {
  ParamVector scale{};
  ParamVector offset{};
  ParamRanges lf_ranges;
  ParamRanges hf_ranges;

  // 0.4 m per cell for width/height, identity for counts.
  static AffineMap standard(const ParamRanges& lf_ranges);
};

// HF ranges spanned by mapping the LF ranges.
ParamRanges map_ranges(const ParamVector& scale, const ParamVector& offset,
                       const ParamRanges& lf_ranges);

// HF lengths are quantized to the nanometer so that exact targets survive
// the floating-point round trip (6 cells * 0.4 != 2.4 in binary).
double quantize_length(double meters);

TaskParams forward(const AffineMap& map, const TaskParams& p_lf);

// Throws NonInvertible when any scale is zero.
TaskParams inverse(const AffineMap& map, const TaskParams& p_hf);

// forward(map, lf_target) == hf_target, bit for bit.
bool anchors(const AffineMap& map, const TaskParams& lf_target, const TaskParams& hf_target);

// Diagonal Gaussian noise added in HF parameter space.
struct NoiseModel {
  ParamVector sigma{};
  int max_rejects = 1000;

  // sigma_i = (max_i - min_i) / 6 over the HF ranges.
  static NoiseModel from_ranges(const ParamRanges& hf_ranges, int max_rejects = 1000);
};

// One raw draw from N(0, diag(sigma^2)).
ParamVector sample_noise(const NoiseModel& noise, Rng& rng);

// forward() plus noise, rounded and resampled until feasible in HF.
// Throws RejectionBudgetExhausted after noise.max_rejects failed draws.
TaskParams forward_noisy(const AffineMap& map, const NoiseModel& noise, const TaskParams& p_lf,
                         Rng& rng);

}  // namespace acute
