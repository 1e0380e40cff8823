#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace distrl {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ReferenceLine {
  std::string label;
  double y = 0.0;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<ReferenceLine> reference_lines;
};

/// Renders a plain SVG line chart with axes, ticks, and a legend.
void write_svg(std::ostream& out, const LineChart& chart);

}  // namespace distrl
