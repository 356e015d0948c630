#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cournot::svg {

struct LineSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<LineSeries> series;
  int width = 720;
  int height = 480;
};

/// Standalone SVG document: axes with ticks, one polyline per series, legend.
std::string render(const LineChart& chart);

}  // namespace cournot::svg
