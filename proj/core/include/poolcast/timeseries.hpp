#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "poolcast/calendar.hpp"

namespace poolcast {

/// Dated daily observations. Dates strictly increasing, values finite,
/// length >= 2. Gaps are allowed; nothing downstream requires contiguity.
struct TimeSeries {
  enum class Kind { Observed, Forecast };

  std::string name;
  std::vector<CalendarDate> dates;
  Eigen::VectorXd values;
  Kind kind = Kind::Observed;

  Eigen::Index size() const { return values.size(); }
};

void validate(const TimeSeries& series);

TimeSeries make_series(std::string name, std::vector<CalendarDate> dates,
                       Eigen::VectorXd values,
                       TimeSeries::Kind kind = TimeSeries::Kind::Observed);

/// Sub-series with dates in [first, last]. Keeps the name.
TimeSeries slice(const TimeSeries& series, const CalendarDate& first,
                 const CalendarDate& last);

/// Sub-series with dates strictly before `end`.
TimeSeries slice_before(const TimeSeries& series, const CalendarDate& end);

/// Maps raw values onto the model scale: y_std = (y - y_mean) / y_sd,
/// time mapped so the training window spans [0, 1].
struct StandardizationInfo {
  double y_mean = 0.0;
  double y_sd = 1.0;  // > 0
  TimeScale time_scale;
};

/// Z-scores with the population (divide-by-T) standard deviation.
/// Constant series are rejected.
std::pair<Eigen::VectorXd, StandardizationInfo> standardize(
    const TimeSeries& series);

/// Pass-through policy: y untouched, time still scaled to [0, 1].
StandardizationInfo identity_standardization(const TimeSeries& series);

Eigen::VectorXd to_standardized(const Eigen::VectorXd& y,
                                const StandardizationInfo& info);
Eigen::VectorXd destandardize(const Eigen::VectorXd& y_std,
                              const StandardizationInfo& info);

}  // namespace poolcast
