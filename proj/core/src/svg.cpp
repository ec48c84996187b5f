#include "fwsparse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "fwsparse/errors.hpp"

namespace fwsparse {

namespace {

constexpr double kWidth = 860, kHeight = 540;
constexpr double kLeft = 72, kRight = 24, kTop = 44, kBottom = 58;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);  // avoid -0
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Tick step of the form {1,2,5}*10^k giving 4-8 ticks over the range.
double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step;
  if (frac <= 1.5) step = 1.0;
  else if (frac <= 3.5) step = 2.0;
  else if (frac <= 7.5) step = 5.0;
  else step = 10.0;
  return step * mag;
}

}  // namespace

LinePlot::LinePlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void LinePlot::add_series(PlotSeries series) {
  if (series.x.size() != series.y.size()) {
    throw RangeError("plot series '" + series.label +
                     "': x and y lengths differ");
  }
  for (std::size_t i = 0; i < series.x.size(); ++i) {
    if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) {
      throw RangeError("plot series '" + series.label +
                       "' contains non-finite values");
    }
  }
  if (series.color.empty()) {
    series.color = kPalette[series_.size() % std::size(kPalette)];
  }
  series_.push_back(std::move(series));
}

void LinePlot::write_svg(const std::filesystem::path& path) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin <= xmax)) { xmin = 0; xmax = 1; }  // no data at all
  if (!(ymin <= ymax)) { ymin = 0; ymax = 1; }
  if (xmin == xmax) { xmin -= 1; xmax += 1; }
  if (ymin == ymax) { ymin -= 1; ymax += 1; }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto X = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * plot_w; };
  const auto Y = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * plot_h; };

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << px(kWidth / 2) << "\" y=\"26\" font-family=\"sans-serif\" "
         "font-size=\"16\" text-anchor=\"middle\">"
      << xml_escape(title_) << "</text>\n";

  // Gridlines and tick labels.
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  const double xstep = nice_step(xmax - xmin);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep;
       t += xstep) {
    const double gx = X(t);
    out << "<line x1=\"" << px(gx) << "\" y1=\"" << px(kTop) << "\" x2=\""
        << px(gx) << "\" y2=\"" << px(kTop + plot_h)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(gx) << "\" y=\"" << px(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep;
       t += ystep) {
    const double gy = Y(t);
    out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(gy) << "\" x2=\""
        << px(kLeft + plot_w) << "\" y2=\"" << px(gy)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << px(kLeft - 6) << "\" y=\"" << px(gy + 4)
        << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  out << "</g>\n";

  // Axes.
  out << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\""
      << px(plot_w) << "\" height=\"" << px(plot_h)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << px(kLeft + plot_w / 2) << "\" y=\""
      << px(kHeight - 14)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
      << xml_escape(x_label_) << "</text>\n";
  out << "<text x=\"18\" y=\"" << px(kTop + plot_h / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 "
      << px(kTop + plot_h / 2) << ")\">" << xml_escape(y_label_)
      << "</text>\n";

  // Series.
  for (const PlotSeries& s : series_) {
    if (s.x.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.6\"";
    if (s.style == LineStyle::Dashed) out << " stroke-dasharray=\"7,4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << ' ';
      out << px(X(s.x[i])) << ',' << px(Y(s.y[i]));
    }
    out << "\"/>\n";
  }

  // Legend, top-right inside the plot area.
  const double lx = kLeft + plot_w - 230, ly = kTop + 12;
  out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << px(lx - 8) << "\" y=\"" << px(ly - 10)
      << "\" width=\"230\" height=\""
      << px(static_cast<double>(series_.size()) * 18 + 10)
      << "\" fill=\"white\" fill-opacity=\"0.85\" stroke=\"#cccccc\"/>\n";
  for (std::size_t i = 0; i < series_.size(); ++i) {
    const PlotSeries& s = series_[i];
    const double ry = ly + static_cast<double>(i) * 18;
    out << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ry) << "\" x2=\""
        << px(lx + 28) << "\" y2=\"" << px(ry) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"1.6\"";
    if (s.style == LineStyle::Dashed) out << " stroke-dasharray=\"7,4\"";
    out << "/>\n";
    out << "<text x=\"" << px(lx + 34) << "\" y=\"" << px(ry + 4) << "\">"
        << xml_escape(s.label) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace fwsparse
