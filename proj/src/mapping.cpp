#include "acute/mapping.hpp"

#include <cmath>

#include "acute/errors.hpp"

namespace acute {

namespace {

constexpr double kLengthQuantum = 1e9;  // steps per meter

TaskParams apply(const TaskParams& in, const ParamVector& values, bool lengths_are_cells) {
  TaskParams out = in;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const auto p = static_cast<Param>(i);
    double v = values[i];
    if (is_length(p)) v = lengths_are_cells ? std::nearbyint(v) : quantize_length(v);
    out.set(p, v);
  }
  return out;
}

}  // namespace

double quantize_length(double meters) {
  return std::nearbyint(meters * kLengthQuantum) / kLengthQuantum;
}

ParamRanges map_ranges(const ParamVector& scale, const ParamVector& offset,
                       const ParamRanges& lf_ranges) {
  ParamRanges hf = lf_ranges;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    double a = scale[i] * lf_ranges.bounds[i].min + offset[i];
    double b = scale[i] * lf_ranges.bounds[i].max + offset[i];
    if (a > b) std::swap(a, b);
    if (is_length(static_cast<Param>(i))) {
      a = quantize_length(a);
      b = quantize_length(b);
    }
    hf.bounds[i] = {a, b};
  }
  return hf;
}

AffineMap AffineMap::standard(const ParamRanges& lf_ranges) {
  AffineMap m;
  m.scale.fill(1.0);
  m.offset.fill(0.0);
  m.scale[static_cast<std::size_t>(Param::Width)] = 0.4;
  m.scale[static_cast<std::size_t>(Param::Height)] = 0.4;
  m.lf_ranges = lf_ranges;
  m.hf_ranges = map_ranges(m.scale, m.offset, lf_ranges);
  return m;
}

TaskParams forward(const AffineMap& map, const TaskParams& p_lf) {
  ParamVector v{};
  for (std::size_t i = 0; i < kNumParams; ++i)
    v[i] = map.scale[i] * p_lf.get(static_cast<Param>(i)) + map.offset[i];
  return apply(p_lf, v, false);
}

TaskParams inverse(const AffineMap& map, const TaskParams& p_hf) {
  ParamVector v{};
  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (map.scale[i] == 0.0)
      throw NonInvertible(std::string("zero scale for ") + param_key(static_cast<Param>(i)));
    v[i] = (p_hf.get(static_cast<Param>(i)) - map.offset[i]) / map.scale[i];
  }
  return apply(p_hf, v, true);
}

bool anchors(const AffineMap& map, const TaskParams& lf_target, const TaskParams& hf_target) {
  return forward(map, lf_target) == hf_target;
}

NoiseModel NoiseModel::from_ranges(const ParamRanges& hf_ranges, int max_rejects) {
  NoiseModel n;
  for (std::size_t i = 0; i < kNumParams; ++i)
    n.sigma[i] = (hf_ranges.bounds[i].max - hf_ranges.bounds[i].min) / 6.0;
  n.max_rejects = max_rejects;
  return n;
}

ParamVector sample_noise(const NoiseModel& noise, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  ParamVector e{};
  for (std::size_t i = 0; i < kNumParams; ++i) e[i] = noise.sigma[i] * unit(rng);
  return e;
}

TaskParams forward_noisy(const AffineMap& map, const NoiseModel& noise, const TaskParams& p_lf,
                         Rng& rng) {
  const TaskParams exact = forward(map, p_lf);
  const ParamVector base = exact.numeric();
  for (int attempt = 0; attempt < noise.max_rejects; ++attempt) {
    const ParamVector e = sample_noise(noise, rng);
    ParamVector v{};
    for (std::size_t i = 0; i < kNumParams; ++i) v[i] = base[i] + e[i];
    TaskParams candidate = apply(exact, v, false);
    if (feasible(candidate, Fidelity::High)) return candidate;
  }
  throw RejectionBudgetExhausted("no feasible noisy mapping of {" + to_string(p_lf) + "} after " +
                                 std::to_string(noise.max_rejects) + " draws");
}

}  // namespace acute
