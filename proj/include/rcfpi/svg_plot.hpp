#pragma once

#include <string>
#include <vector>

namespace rcfpi {

/// Minimal static line-chart renderer so experiment outputs are viewable
/// without an external plotting stack.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = false;
  int width = 760;
  int height = 480;
};

std::string render_line_chart(const std::vector<SvgSeries>& series, const SvgPlotOptions& opts);

}  // namespace rcfpi
