#include "poolcast/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "poolcast/csv.hpp"
#include "poolcast/errors.hpp"

namespace poolcast {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 48.0;

const char* kPalette[] = {"#111111", "#d62728", "#1f77b4", "#2ca02c",
                          "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
constexpr int kPaletteSize = 8;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;

  double to_px(double v, double px_lo, double px_hi) const {
    if (hi == lo) return 0.5 * (px_lo + px_hi);
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

Axis make_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::vector<double> ticks(const Axis& axis, int target = 6) {
  const double span = axis.hi - axis.lo;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> out;
  for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-9 * span;
       v += step) {
    out.push_back(v);
  }
  return out;
}

class SvgChart {
 public:
  SvgChart(std::string title, Axis x, Axis y, std::string x_label)
      : x_(x), y_(y) {
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    os_ << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    os_ << "<text x=\"" << kLeft << "\" y=\"22\" font-family=\"sans-serif\" "
        << "font-size=\"15\" fill=\"#111\">" << title << "</text>\n";
    grid();
    os_ << "<text x=\"" << (kLeft + plot_w() / 2.0) << "\" y=\""
        << (kHeight - 10.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\" "
        << "text-anchor=\"middle\">" << x_label << "</text>\n";
  }

  double px(double v) const { return x_.to_px(v, kLeft, kWidth - kRight); }
  double py(double v) const {
    return y_.to_px(v, kHeight - kBottom, kTop);
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color) {
    os_ << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      os_ << num(px(xs[i])) << "," << num(py(ys[i])) << " ";
    }
    os_ << "\"/>\n";
  }

  void point(double x, double y, const std::string& color, double r = 3.0) {
    os_ << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
        << "\" r=\"" << r << "\" fill=\"" << color << "\"/>\n";
  }

  void vline_segment(double x, double y0, double y1, const std::string& color) {
    os_ << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(py(y0))
        << "\" x2=\"" << num(px(x)) << "\" y2=\"" << num(py(y1))
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
  }

  void legend(const std::vector<std::string>& labels) {
    double y = kTop + 6.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const char* color = kPalette[i % kPaletteSize];
      os_ << "<line x1=\"" << (kLeft + 8.0) << "\" y1=\"" << y << "\" x2=\""
          << (kLeft + 34.0) << "\" y2=\"" << y << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
      os_ << "<text x=\"" << (kLeft + 40.0) << "\" y=\"" << (y + 4.0)
          << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111\">"
          << labels[i] << "</text>\n";
      y += 16.0;
    }
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  double plot_w() const { return kWidth - kLeft - kRight; }

  void grid() {
    for (double v : ticks(y_)) {
      const double y = py(v);
      os_ << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\""
          << (kWidth - kRight) << "\" y2=\"" << num(y)
          << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
      os_ << "<text x=\"" << (kLeft - 6.0) << "\" y=\"" << num(y + 4.0)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
          << "text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    for (double v : ticks(x_)) {
      const double x = px(v);
      os_ << "<line x1=\"" << num(x) << "\" y1=\"" << kTop << "\" x2=\""
          << num(x) << "\" y2=\"" << (kHeight - kBottom)
          << "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
      os_ << "<text x=\"" << num(x) << "\" y=\"" << (kHeight - kBottom + 16.0)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
          << "text-anchor=\"middle\">" << num(v) << "</text>\n";
    }
    os_ << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << plot_w() << "\" height=\"" << (kHeight - kTop - kBottom)
        << "\" fill=\"none\" stroke=\"#999999\"/>\n";
  }

  std::ostringstream os_;
  Axis x_, y_;
};

}  // namespace

std::vector<std::string> emit_forecast_overlay(
    const std::string& path_base, const TimeSeries& actual,
    const std::vector<TimeSeries>& forecasts) {
  CalendarDate first = actual.dates.front();
  CalendarDate last = actual.dates.back();
  for (const auto& f : forecasts) {
    if (f.dates.empty()) continue;
    first = std::min(first, f.dates.front());
    last = std::max(last, f.dates.back());
  }

  double lo = actual.values.minCoeff();
  double hi = actual.values.maxCoeff();
  for (const auto& f : forecasts) {
    lo = std::min(lo, f.values.minCoeff());
    hi = std::max(hi, f.values.maxCoeff());
  }

  const Axis x_axis{0.0, std::max<double>(1.0, static_cast<double>(
                                                   days_between(first, last)))};
  SvgChart chart("forecast overlay: " + actual.name, x_axis, make_axis(lo, hi),
                 "days since " + format_date(first));

  std::string csv = "series,date,value\n";
  std::vector<std::string> labels;
  auto draw = [&](const TimeSeries& s, const std::string& label, int color) {
    std::vector<double> xs, ys;
    xs.reserve(s.dates.size());
    for (std::size_t i = 0; i < s.dates.size(); ++i) {
      xs.push_back(static_cast<double>(days_between(first, s.dates[i])));
      ys.push_back(s.values(static_cast<Eigen::Index>(i)));
      csv += label + "," + format_date(s.dates[i]) + "," +
             format_double(s.values(static_cast<Eigen::Index>(i))) + "\n";
    }
    chart.polyline(xs, ys, kPalette[color % kPaletteSize]);
    labels.push_back(label);
  };

  draw(actual, "actual", 0);
  int color = 1;
  for (const auto& f : forecasts) draw(f, f.name, color++);
  chart.legend(labels);

  write_text_file(path_base + ".svg", chart.finish());
  write_text_file(path_base + ".csv", csv);
  return {path_base + ".svg", path_base + ".csv"};
}

namespace {

struct IntervalRow {
  int index;
  double map;
  double sd;
};

std::vector<std::string> emit_interval_chart(const std::string& path_base,
                                             const std::string& title,
                                             const std::vector<IntervalRow>&
                                                 rows) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    lo = std::min(lo, r.map - r.sd);
    hi = std::max(hi, r.map + r.sd);
  }
  const Axis x_axis{-0.5, rows.back().index + 0.5};
  SvgChart chart(title, x_axis, make_axis(lo, hi), "subcategory index");
  std::string csv = "index,map,sd,lo,hi\n";
  for (const auto& r : rows) {
    chart.vline_segment(r.index, r.map - r.sd, r.map + r.sd,
                        kPalette[2]);
    chart.point(r.index, r.map, kPalette[0]);
    csv += std::to_string(r.index) + "," + format_double(r.map) + "," +
           format_double(r.sd) + "," + format_double(r.map - r.sd) + "," +
           format_double(r.map + r.sd) + "\n";
  }
  write_text_file(path_base + ".svg", chart.finish());
  write_text_file(path_base + ".csv", csv);
  return {path_base + ".svg", path_base + ".csv"};
}

}  // namespace

std::vector<std::string> emit_parameter_intervals(const std::string& path_base,
                                                  const MapResult& fit,
                                                  const PosteriorDraws& draws,
                                                  const ModelSpec& spec) {
  if (draws.params.empty()) {
    throw ContractError(
        "parameter interval plots need posterior draws; run a fit with draws "
        "first");
  }
  const auto cards = parameter_cardinalities(spec);
  std::vector<std::string> written;
  for (std::size_t d = 0; d < cards.size(); ++d) {
    const std::string dim_name =
        spec.kind == ModelKind::Complete ? "all" : spec.dims[d].name();
    for (const bool is_k : {true, false}) {
      std::vector<IntervalRow> rows;
      for (int j = 0; j < cards[d]; ++j) {
        double mean = 0.0, sq = 0.0;
        for (const auto& p : draws.params) {
          const double v = is_k ? p.k[d](j) : p.m[d](j);
          mean += v;
          sq += v * v;
        }
        const double n = static_cast<double>(draws.params.size());
        mean /= n;
        const double var = std::max(0.0, sq / n - mean * mean);
        const double map_value = is_k ? fit.params.k[d](j) : fit.params.m[d](j);
        rows.push_back({j, map_value, std::sqrt(var)});
      }
      const std::string tag = std::string(is_k ? "k" : "m") + "_" + dim_name;
      auto files = emit_interval_chart(
          path_base + "_params_" + tag,
          std::string(is_k ? "growth rate k" : "offset m") + " by " + dim_name +
              " subcategory (MAP +/- laplace sd)",
          rows);
      written.insert(written.end(), files.begin(), files.end());
    }
  }
  return written;
}

std::vector<std::string> emit_theta_histogram(const std::string& path_base,
                                              const PosteriorDraws& draws,
                                              const ModelSpec& spec,
                                              int bins) {
  if (draws.params.empty()) {
    throw ContractError(
        "theta histograms need posterior draws; run a fit with draws first");
  }
  if (bins < 1) throw ConfigError("theta histogram needs at least one bin");
  const auto cards = parameter_cardinalities(spec);
  const int D = static_cast<int>(cards.size());

  std::vector<std::vector<int>> counts(
      static_cast<std::size_t>(D), std::vector<int>(static_cast<std::size_t>(bins), 0));
  for (const auto& p : draws.params) {
    for (int d = 0; d < D; ++d) {
      const double v = p.theta(d);
      int b = static_cast<int>(v * bins);
      b = std::clamp(b, 0, bins - 1);
      ++counts[static_cast<std::size_t>(d)][static_cast<std::size_t>(b)];
    }
  }

  int max_count = 1;
  for (const auto& c : counts) {
    for (int v : c) max_count = std::max(max_count, v);
  }
  SvgChart chart("posterior mixture weights", Axis{0.0, 1.0},
                 Axis{0.0, static_cast<double>(max_count) * 1.05}, "theta");
  std::string csv = "dim,bin_lo,bin_hi,count\n";
  std::vector<std::string> labels;
  for (int d = 0; d < D; ++d) {
    const std::string dim_name =
        spec.kind == ModelKind::Complete ? "all" : spec.dims[static_cast<std::size_t>(d)].name();
    std::vector<double> xs, ys;
    for (int b = 0; b < bins; ++b) {
      const double lo = static_cast<double>(b) / bins;
      const double hi = static_cast<double>(b + 1) / bins;
      const int count = counts[static_cast<std::size_t>(d)][static_cast<std::size_t>(b)];
      xs.push_back(lo);
      ys.push_back(count);
      xs.push_back(hi);
      ys.push_back(count);
      csv += dim_name + "," + format_double(lo) + "," + format_double(hi) +
             "," + std::to_string(count) + "\n";
    }
    chart.polyline(xs, ys, kPalette[(d + 1) % kPaletteSize]);
    labels.push_back("theta[" + dim_name + "]");
  }
  chart.legend(labels);
  write_text_file(path_base + "_theta.svg", chart.finish());
  write_text_file(path_base + "_theta.csv", csv);
  return {path_base + "_theta.svg", path_base + "_theta.csv"};
}

}  // namespace poolcast
