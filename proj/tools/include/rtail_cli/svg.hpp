#pragma once

#include <string>
#include <vector>

namespace rtail::cli {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Static log-log line plot. Nonpositive points are skipped.
std::string loglog_svg(const std::string& title, const std::vector<PlotSeries>& series);

}  // namespace rtail::cli
