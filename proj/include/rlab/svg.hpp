#pragma once

#include <string>
#include <vector>

namespace rlab::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> half_band;  // optional +- band around y (same length)
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 860;
  int height = 540;
};

// Hand-rolled SVG line chart: axes, ticks, optional shaded error bands, and a
// legend. Good enough to eyeball every CSV this project emits.
void write_line_svg(const std::string& path, const PlotSpec& spec,
                    const std::vector<Series>& series);

}  // namespace rlab::plot
