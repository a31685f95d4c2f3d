#include "poolcast/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "poolcast/errors.hpp"

namespace poolcast {

void validate(const TimeSeries& series) {
  if (series.dates.size() != static_cast<std::size_t>(series.values.size())) {
    throw DataError("series '" + series.name + "': " +
                    std::to_string(series.dates.size()) + " dates vs " +
                    std::to_string(series.values.size()) + " values");
  }
  if (series.size() < 2) {
    throw DataError("series '" + series.name + "': need at least 2 rows");
  }
  for (std::size_t i = 1; i < series.dates.size(); ++i) {
    if (!(series.dates[i - 1] < series.dates[i])) {
      throw DataError("series '" + series.name +
                      "': dates not strictly increasing at " +
                      format_date(series.dates[i]));
    }
  }
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series.values(i))) {
      throw DataError("series '" + series.name + "': non-finite value at " +
                      format_date(series.dates[static_cast<std::size_t>(i)]));
    }
  }
}

TimeSeries make_series(std::string name, std::vector<CalendarDate> dates,
                       Eigen::VectorXd values, TimeSeries::Kind kind) {
  TimeSeries s{std::move(name), std::move(dates), std::move(values), kind};
  validate(s);
  return s;
}

namespace {

TimeSeries take_rows(const TimeSeries& series,
                     const std::vector<std::size_t>& rows) {
  TimeSeries out;
  out.name = series.name;
  out.kind = series.kind;
  out.dates.reserve(rows.size());
  out.values.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.dates.push_back(series.dates[rows[i]]);
    out.values(static_cast<Eigen::Index>(i)) =
        series.values(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace

TimeSeries slice(const TimeSeries& series, const CalendarDate& first,
                 const CalendarDate& last) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < series.dates.size(); ++i) {
    if (series.dates[i] >= first && series.dates[i] <= last) rows.push_back(i);
  }
  return take_rows(series, rows);
}

TimeSeries slice_before(const TimeSeries& series, const CalendarDate& end) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < series.dates.size(); ++i) {
    if (series.dates[i] < end) rows.push_back(i);
  }
  return take_rows(series, rows);
}

namespace {

TimeScale training_scale(const TimeSeries& series) {
  const std::int64_t span =
      days_between(series.dates.front(), series.dates.back());
  return TimeScale{series.dates.front(), std::max<std::int64_t>(span, 1)};
}

}  // namespace

std::pair<Eigen::VectorXd, StandardizationInfo> standardize(
    const TimeSeries& series) {
  validate(series);
  StandardizationInfo info;
  info.time_scale = training_scale(series);
  info.y_mean = series.values.mean();
  const double var =
      (series.values.array() - info.y_mean).square().sum() /
      static_cast<double>(series.size());
  info.y_sd = std::sqrt(var);
  if (!(info.y_sd > 0.0)) {
    throw DataError("series '" + series.name +
                    "' is constant; cannot standardize");
  }
  return {to_standardized(series.values, info), info};
}

StandardizationInfo identity_standardization(const TimeSeries& series) {
  validate(series);
  StandardizationInfo info;
  info.time_scale = training_scale(series);
  return info;
}

Eigen::VectorXd to_standardized(const Eigen::VectorXd& y,
                                const StandardizationInfo& info) {
  return (y.array() - info.y_mean) / info.y_sd;
}

Eigen::VectorXd destandardize(const Eigen::VectorXd& y_std,
                              const StandardizationInfo& info) {
  return (y_std.array() * info.y_sd + info.y_mean).matrix();
}

}  // namespace poolcast
