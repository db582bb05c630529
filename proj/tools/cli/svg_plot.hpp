#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace relaycast::cli {

struct Series {
  std::string label;
  std::string color;
  std::string dash;  ///< stroke-dasharray, empty for solid
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
  int width = 720;
  int height = 480;
};

/// Polyline chart with axes, decade ticks on a log y axis and a legend.
/// Non-finite or (on log axes) non-positive points break the line.
void write_svg(std::ostream& out, const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace relaycast::cli
