#include "poolcast/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "poolcast/errors.hpp"

namespace poolcast {

std::string format_double(double x) {
  char buf[40];
  for (int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("short write to '" + path + "'");
}

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

TimeSeries load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
  line = strip_cr(line);
  if (line != "date,value") {
    throw DataError("'" + path + "' line 1: expected header 'date,value'");
  }

  std::vector<CalendarDate> dates;
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DataError("'" + path + "' line " + std::to_string(line_no) +
                      ": expected 'date,value'");
    }
    CalendarDate d;
    try {
      d = parse_date(line.substr(0, comma));
    } catch (const ParseError& e) {
      throw DataError("'" + path + "' line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    const std::string value_text = line.substr(comma + 1);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(value_text.c_str(), &end);
    if (end == value_text.c_str() || *end != '\0' || errno == ERANGE) {
      throw DataError("'" + path + "' line " + std::to_string(line_no) +
                      ": cannot parse value '" + value_text + "'");
    }
    dates.push_back(d);
    values.push_back(value);
  }
  if (dates.size() < 2) {
    throw DataError("'" + path + "': need at least 2 data rows");
  }

  // Accept out-of-order rows; sort by date, then reject duplicates with
  // the offending input line.
  std::vector<std::size_t> order(dates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return dates[a] < dates[b];
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (dates[order[i - 1]] == dates[order[i]]) {
      throw DataError("'" + path + "' line " +
                      std::to_string(order[i] + 2) + ": duplicate date " +
                      format_date(dates[order[i]]));
    }
  }

  TimeSeries out;
  out.name = path;
  out.dates.reserve(dates.size());
  out.values.resize(static_cast<Eigen::Index>(dates.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.dates.push_back(dates[order[i]]);
    out.values(static_cast<Eigen::Index>(i)) = values[order[i]];
  }
  validate(out);
  return out;
}

void save_csv(const TimeSeries& series, const std::string& path) {
  std::string content = "date,value\n";
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    content += format_date(series.dates[static_cast<std::size_t>(i)]);
    content += ',';
    content += format_double(series.values(i));
    content += '\n';
  }
  write_text_file(path, content);
}

}  // namespace poolcast
