#pragma once

#include <string>
#include <vector>

#include "poolcast/inference.hpp"
#include "poolcast/timeseries.hpp"

namespace poolcast {

/// Forecast-overlay line chart (actual vs each model). Writes
/// <path_base>.svg and <path_base>.csv with identical numbers; returns
/// the written paths.
std::vector<std::string> emit_forecast_overlay(
    const std::string& path_base, const TimeSeries& actual,
    const std::vector<TimeSeries>& forecasts);

/// Per-subcategory k and m interval charts (MAP +/- Laplace sd from the
/// draws), one svg+csv pair per (parameter, dimension).
std::vector<std::string> emit_parameter_intervals(const std::string& path_base,
                                                  const MapResult& fit,
                                                  const PosteriorDraws& draws,
                                                  const ModelSpec& spec);

/// Histogram of the posterior mixture weights, one curve per dimension.
/// A one-dimensional model yields a point mass at 1.
std::vector<std::string> emit_theta_histogram(const std::string& path_base,
                                              const PosteriorDraws& draws,
                                              const ModelSpec& spec,
                                              int bins = 40);

}  // namespace poolcast
