#pragma once

#include <Eigen/Core>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace poolcast {

/// Civil date under the proleptic Gregorian calendar. No time zones.
struct CalendarDate {
  int year = 1970;
  int month = 1;  // 1-12
  int day = 1;    // 1-31, valid for (year, month)

  auto operator<=>(const CalendarDate&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(const CalendarDate& d);

/// Days since 1970-01-01 (negative before). Proleptic Gregorian.
std::int64_t days_from_epoch(const CalendarDate& d);
CalendarDate date_from_epoch_days(std::int64_t days);

CalendarDate add_days(const CalendarDate& d, std::int64_t n);
std::int64_t days_between(const CalendarDate& from, const CalendarDate& to);

/// Strict YYYY-MM-DD. Throws ParseError naming the offending field.
CalendarDate parse_date(const std::string& text);
std::string format_date(const CalendarDate& d);

/// Monday = 0 ... Sunday = 6.
int day_of_week(const CalendarDate& d);

/// Zero-based day of month: 0 ... 30.
int day_of_month(const CalendarDate& d);

/// A seasonality dimension. The cardinality is fixed by the tag.
struct SeasonalityKind {
  enum class Tag { DayOfWeek, DayOfMonth };
  Tag tag = Tag::DayOfWeek;

  int cardinality() const { return tag == Tag::DayOfWeek ? 7 : 31; }
  int index_for(const CalendarDate& d) const {
    return tag == Tag::DayOfWeek ? day_of_week(d) : day_of_month(d);
  }
  std::string name() const { return tag == Tag::DayOfWeek ? "week" : "month"; }

  bool operator==(const SeasonalityKind&) const = default;
};

inline SeasonalityKind week_seasonality() {
  return {SeasonalityKind::Tag::DayOfWeek};
}
inline SeasonalityKind month_seasonality() {
  return {SeasonalityKind::Tag::DayOfMonth};
}

/// Parses "week"/"month" (also accepts "day-of-week"/"day-of-month").
SeasonalityKind parse_seasonality(const std::string& text);

/// Per-observation seasonal subcategory indices, one column per dimension.
struct PoolingAssignment {
  Eigen::MatrixXi indices;            // T x D
  std::vector<SeasonalityKind> dims;  // length D

  Eigen::Index rows() const { return indices.rows(); }
  Eigen::Index cols() const { return indices.cols(); }
};

/// indices[i][d] = dims[d].index_for(dates[i]). Duplicate dims rejected.
PoolingAssignment build_pooling(const std::vector<CalendarDate>& dates,
                                const std::vector<SeasonalityKind>& dims);

/// Affine time axis: origin maps to 0, origin + span_days maps to 1.
struct TimeScale {
  CalendarDate origin;
  std::int64_t span_days = 1;  // >= 1
};

/// t[i] = days(origin, dates[i]) / span_days. Dates before origin rejected.
Eigen::VectorXd scaled_time(const std::vector<CalendarDate>& dates,
                            const TimeScale& scale);

/// Consecutive daily dates, inclusive on both ends.
std::vector<CalendarDate> date_range(const CalendarDate& first,
                                     const CalendarDate& last);

}  // namespace poolcast
