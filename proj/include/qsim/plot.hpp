#pragma once

#include <string>
#include <vector>

namespace qsim {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart, one polyline per series with axis ticks and a
/// legend. NaN points are skipped. Returns false when the file cannot be
/// written; callers treat that as "CSV only" and warn instead of failing.
bool write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace qsim
