#include "poolcast/calendar.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include "poolcast/errors.hpp"

namespace poolcast {

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static constexpr int lengths[12] = {31, 28, 31, 30, 31, 30,
                                      31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap_year(year)) return 29;
  return lengths[month - 1];
}

bool is_valid_date(const CalendarDate& d) {
  return d.month >= 1 && d.month <= 12 && d.day >= 1 &&
         d.day <= days_in_month(d.year, d.month);
}

// Civil-from-days / days-from-civil after Howard Hinnant's algorithms;
// valid across the full proleptic Gregorian range.
std::int64_t days_from_epoch(const CalendarDate& d) {
  std::int64_t y = d.year;
  const int m = d.month;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CalendarDate date_from_epoch_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned month = mp + (mp < 10 ? 3 : -9);
  return CalendarDate{static_cast<int>(y + (month <= 2)),
                      static_cast<int>(month), static_cast<int>(day)};
}

CalendarDate add_days(const CalendarDate& d, std::int64_t n) {
  return date_from_epoch_days(days_from_epoch(d) + n);
}

std::int64_t days_between(const CalendarDate& from, const CalendarDate& to) {
  return days_from_epoch(to) - days_from_epoch(from);
}

namespace {

int parse_int_field(const std::string& text, std::size_t begin, std::size_t end,
                    const char* field) {
  int value = 0;
  const char* first = text.data() + begin;
  const char* last = text.data() + end;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("date '" + text + "': invalid " + field);
  }
  return value;
}

}  // namespace

CalendarDate parse_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ParseError("date '" + text + "': expected YYYY-MM-DD");
  }
  CalendarDate d;
  d.year = parse_int_field(text, 0, 4, "year");
  d.month = parse_int_field(text, 5, 7, "month");
  d.day = parse_int_field(text, 8, 10, "day");
  if (d.month < 1 || d.month > 12) {
    throw ParseError("date '" + text + "': invalid month");
  }
  if (d.day < 1 || d.day > days_in_month(d.year, d.month)) {
    throw ParseError("date '" + text + "': invalid day");
  }
  return d;
}

std::string format_date(const CalendarDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

int day_of_week(const CalendarDate& d) {
  // 1970-01-01 was a Thursday (3 under Monday = 0).
  const std::int64_t z = days_from_epoch(d) + 3;
  return static_cast<int>(((z % 7) + 7) % 7);
}

int day_of_month(const CalendarDate& d) { return d.day - 1; }

SeasonalityKind parse_seasonality(const std::string& text) {
  if (text == "week" || text == "day-of-week" || text == "dow") {
    return week_seasonality();
  }
  if (text == "month" || text == "day-of-month" || text == "dom") {
    return month_seasonality();
  }
  throw ConfigError("unknown seasonality '" + text +
                    "' (expected 'week' or 'month')");
}

PoolingAssignment build_pooling(const std::vector<CalendarDate>& dates,
                                const std::vector<SeasonalityKind>& dims) {
  if (dates.empty()) throw ConfigError("build_pooling: no dates");
  if (dims.empty()) throw ConfigError("build_pooling: no seasonality dims");
  std::set<SeasonalityKind::Tag> seen;
  for (const auto& dim : dims) {
    if (!seen.insert(dim.tag).second) {
      throw ConfigError("duplicate seasonality dimension '" + dim.name() + "'");
    }
  }
  PoolingAssignment out;
  out.dims = dims;
  out.indices.resize(static_cast<Eigen::Index>(dates.size()),
                     static_cast<Eigen::Index>(dims.size()));
  for (std::size_t i = 0; i < dates.size(); ++i) {
    for (std::size_t d = 0; d < dims.size(); ++d) {
      out.indices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          dims[d].index_for(dates[i]);
    }
  }
  return out;
}

Eigen::VectorXd scaled_time(const std::vector<CalendarDate>& dates,
                            const TimeScale& scale) {
  if (scale.span_days < 1) throw DomainError("time scale span must be >= 1 day");
  Eigen::VectorXd t(static_cast<Eigen::Index>(dates.size()));
  for (std::size_t i = 0; i < dates.size(); ++i) {
    const std::int64_t offset = days_between(scale.origin, dates[i]);
    if (offset < 0) {
      throw DomainError("date " + format_date(dates[i]) +
                        " precedes the time-scale origin " +
                        format_date(scale.origin));
    }
    t(static_cast<Eigen::Index>(i)) =
        static_cast<double>(offset) / static_cast<double>(scale.span_days);
  }
  return t;
}

std::vector<CalendarDate> date_range(const CalendarDate& first,
                                     const CalendarDate& last) {
  const std::int64_t n = days_between(first, last);
  if (n < 0) throw DomainError("date_range: last precedes first");
  std::vector<CalendarDate> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i) out.push_back(add_days(first, i));
  return out;
}

}  // namespace poolcast
