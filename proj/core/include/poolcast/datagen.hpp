#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "poolcast/calendar.hpp"
#include "poolcast/model.hpp"
#include "poolcast/timeseries.hpp"

namespace poolcast {

struct SeasonEffects {
  SeasonalityKind kind;
  Eigen::VectorXd k_offset;  // length == kind.cardinality()
  Eigen::VectorXd m_offset;
};

/// Ground-truth generator spec: linear trend, per-subcategory effects,
/// a simplex weight over effect dimensions, Gaussian noise, fixed seed.
struct SynthSpec {
  std::string name = "synthetic";
  CalendarDate start{2017, 1, 1};
  CalendarDate end{2018, 12, 31};
  double trend_k = 0.0;
  double trend_m = 0.0;
  std::vector<SeasonEffects> effects;
  Eigen::VectorXd weights;  // simplex over effects
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
};

void validate(const SynthSpec& spec);

struct SynthResult {
  TimeSeries series;
  Eigen::VectorXd noiseless_mean;
};

/// y_i = sum_d w_d (trend_k + k_off[d][pool]) t_i
///     + sum_d w_d (trend_m + m_off[d][pool]) + Normal(0, noise_sd),
/// with t the scaled time axis over [start, end]. Deterministic per seed.
SynthResult synthesize(const SynthSpec& spec);

/// The generating parameters arranged for predict_mean: feeding these into
/// the mixed model over matching_spec(spec) reproduces the noiseless mean.
ParameterSet true_parameters(const SynthSpec& spec);
ModelSpec matching_spec(const SynthSpec& spec);

/// Named presets: "delivery-like" (deep Sunday drop, weekly only),
/// "restocking-like" (month-boundary spikes, monthly only),
/// "shipment-like" (both, weights 0.6/0.4).
SynthSpec preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace poolcast
