#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fwsparse {

enum class LineStyle { Solid, Dashed };

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // same length as x, finite values only
  std::string color;      // "#rrggbb"; empty picks from a fixed palette
  LineStyle style = LineStyle::Solid;
};

// Minimal self-contained SVG line chart: axes with auto-chosen decimal
// ticks, a legend, solid and dashed strokes. Output is a pure function of
// the inputs (fixed canvas, fixed number formatting), so repeat renders are
// byte-identical. RangeError on malformed series (length mismatch,
// non-finite values); IoError on write failure.
class LinePlot {
 public:
  LinePlot(std::string title, std::string x_label, std::string y_label);

  void add_series(PlotSeries series);
  void write_svg(const std::filesystem::path& path) const;

 private:
  std::string title_, x_label_, y_label_;
  std::vector<PlotSeries> series_;
};

}  // namespace fwsparse
