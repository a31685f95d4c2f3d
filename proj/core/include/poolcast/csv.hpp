#pragma once

#include <string>

#include "poolcast/timeseries.hpp"

namespace poolcast {

/// Reads a `date,value` CSV (ISO-8601 dates). Rows are sorted by date;
/// duplicate dates and unparseable values are reported with line numbers.
TimeSeries load_csv(const std::string& path);

/// Writes `date,value` with round-trip-exact float formatting.
void save_csv(const TimeSeries& series, const std::string& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace poolcast
