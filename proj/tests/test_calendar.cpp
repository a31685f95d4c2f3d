#include <doctest.h>

#include <chrono>

#include "poolcast/calendar.hpp"
#include "poolcast/errors.hpp"

using namespace poolcast;

namespace {

// Reference calendar: std::chrono's proleptic Gregorian implementation.
int chrono_weekday_monday0(const CalendarDate& d) {
  using namespace std::chrono;
  const year_month_day ymd{year{d.year}, month{static_cast<unsigned>(d.month)},
                           day{static_cast<unsigned>(d.day)}};
  return static_cast<int>(weekday{sys_days{ymd}}.iso_encoding()) - 1;
}

std::int64_t chrono_epoch_days(const CalendarDate& d) {
  using namespace std::chrono;
  const year_month_day ymd{year{d.year}, month{static_cast<unsigned>(d.month)},
                           day{static_cast<unsigned>(d.day)}};
  return sys_days{ymd}.time_since_epoch().count();
}

}  // namespace

TEST_CASE("parse_date accepts ISO dates and rejects impossible ones") {
  CHECK(parse_date("2018-01-01") == CalendarDate{2018, 1, 1});
  CHECK(parse_date("2020-02-29") == CalendarDate{2020, 2, 29});
  CHECK(chrono_weekday_monday0({2020, 2, 29}) == day_of_week({2020, 2, 29}));

  CHECK_THROWS_AS(parse_date("2018-02-30"), ParseError);
  CHECK_THROWS_AS(parse_date("2019-02-29"), ParseError);
  CHECK_THROWS_AS(parse_date("2018-13-01"), ParseError);
  CHECK_THROWS_AS(parse_date("2018-00-10"), ParseError);
  CHECK_THROWS_AS(parse_date("2018-1-01"), ParseError);
  CHECK_THROWS_AS(parse_date("18-01-001"), ParseError);
  CHECK_THROWS_AS(parse_date("2018/01/01"), ParseError);
  CHECK_THROWS_AS(parse_date("2018-01-xx"), ParseError);
}

TEST_CASE("format_date round-trips") {
  for (const char* text : {"2018-01-01", "0400-02-29", "1999-12-31"}) {
    CHECK(format_date(parse_date(text)) == text);
  }
}

TEST_CASE("day_of_week matches the reference calendar") {
  CHECK(day_of_week({2018, 1, 1}) == 0);  // Monday
  CHECK(day_of_week({2017, 1, 1}) == 6);  // Sunday

  CalendarDate d{2015, 1, 1};
  for (int i = 0; i < 3000; ++i) {
    CHECK(day_of_week(d) == chrono_weekday_monday0(d));
    CHECK(days_from_epoch(d) == chrono_epoch_days(d));
    d = add_days(d, 1);
  }
}

TEST_CASE("day_of_week has weekly period") {
  CalendarDate d{2016, 2, 25};
  for (int i = 0; i < 600; ++i) {
    CHECK(day_of_week(add_days(d, 7)) == day_of_week(d));
    d = add_days(d, 1);
  }
}

TEST_CASE("day_of_month is the zero-based day") {
  CHECK(day_of_month({2018, 1, 31}) == 30);
  CHECK(day_of_month({2018, 2, 1}) == 0);

  // February never reaches indices 28-30 in non-leap years.
  for (int day = 1; day <= 28; ++day) {
    CHECK(day_of_month({2018, 2, day}) <= 27);
  }
  CHECK_THROWS(parse_date("2018-02-29"));
  CHECK(day_of_month({2020, 2, 29}) == 28);
}

TEST_CASE("day_of_month resets on the first of each month") {
  CalendarDate d{2017, 1, 1};
  for (int i = 0; i < 730; ++i) {
    if (d.day == 1) CHECK(day_of_month(d) == 0);
    d = add_days(d, 1);
  }
}

TEST_CASE("build_pooling composes the per-dimension indices") {
  const std::vector<CalendarDate> jan1 = {{2018, 1, 1}};
  auto p = build_pooling(jan1, {week_seasonality(), month_seasonality()});
  CHECK(p.indices(0, 0) == 0);
  CHECK(p.indices(0, 1) == 0);

  const std::vector<CalendarDate> jan7 = {{2018, 1, 7}};  // Sunday
  auto pw = build_pooling(jan7, {week_seasonality()});
  CHECK(pw.indices(0, 0) == 6);

  CHECK_THROWS_AS(
      build_pooling(jan1, {week_seasonality(), week_seasonality()}),
      ConfigError);
  CHECK_THROWS_AS(build_pooling({}, {week_seasonality()}), ConfigError);
}

TEST_CASE("pooling is a pure function of the dates") {
  const auto dates = date_range({2017, 3, 1}, {2017, 9, 30});
  const std::vector<SeasonalityKind> dims = {week_seasonality(),
                                             month_seasonality()};
  const auto a = build_pooling(dates, dims);
  const auto b = build_pooling(dates, dims);
  CHECK(a.indices == b.indices);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    CHECK(a.indices(i, 0) >= 0);
    CHECK(a.indices(i, 0) < 7);
    CHECK(a.indices(i, 1) >= 0);
    CHECK(a.indices(i, 1) < 31);
  }
}

TEST_CASE("scaled_time maps the window onto [0, 1]") {
  const TimeScale scale{{2017, 1, 1}, 729};
  CHECK(scaled_time({{{2017, 1, 1}}}, scale)(0) == doctest::Approx(0.0));
  CHECK(scaled_time({{{2018, 12, 31}}}, scale)(0) == doctest::Approx(1.0));
  CHECK(scaled_time({{{2019, 1, 30}}}, scale)(0) ==
        doctest::Approx(759.0 / 729.0));
  CHECK_THROWS_AS(scaled_time({{{2016, 12, 31}}}, scale), DomainError);
}

TEST_CASE("scaled_time is strictly increasing over increasing dates") {
  const auto dates = date_range({2017, 1, 1}, {2017, 12, 31});
  const auto t = scaled_time(dates, {{2017, 1, 1}, 364});
  for (Eigen::Index i = 1; i < t.size(); ++i) CHECK(t(i) > t(i - 1));
}

TEST_CASE("parse_seasonality") {
  CHECK(parse_seasonality("week") == week_seasonality());
  CHECK(parse_seasonality("month") == month_seasonality());
  CHECK_THROWS_AS(parse_seasonality("year"), ConfigError);
}
