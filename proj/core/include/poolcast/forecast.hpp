#pragma once

#include <Eigen/Core>
#include <vector>

#include "poolcast/inference.hpp"
#include "poolcast/model.hpp"
#include "poolcast/timeseries.hpp"

namespace poolcast {

/// Original-scale forecast: posterior-mean point forecast plus predictive
/// quantiles that include observation noise per draw.
struct Forecast {
  std::vector<CalendarDate> dates;
  Eigen::VectorXd mean;
  Eigen::VectorXd q_lo;
  Eigen::VectorXd q_hi;
  double level_lo = 0.1;
  double level_hi = 0.9;
};

/// Plug-in prediction mean for one parameter set, destandardized.
Eigen::VectorXd point_forecast(const ParameterSet& params,
                               const ModelSpec& spec,
                               const StandardizationInfo& info,
                               const std::vector<CalendarDate>& dates);

/// Per-draw prediction means (S x T), destandardized.
Eigen::MatrixXd draw_means(const PosteriorDraws& draws, const ModelSpec& spec,
                           const StandardizationInfo& info,
                           const std::vector<CalendarDate>& dates);

Forecast forecast_from_draws(const PosteriorDraws& draws,
                             const ModelSpec& spec,
                             const StandardizationInfo& info,
                             const std::vector<CalendarDate>& dates,
                             double level_lo = 0.1, double level_hi = 0.9);

/// Quantile of an equally-weighted normal mixture, solved by bisection.
double normal_mixture_quantile(const Eigen::VectorXd& means,
                               const Eigen::VectorXd& sds, double p);

}  // namespace poolcast
