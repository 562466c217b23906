#include "qsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace qsim {

namespace {

constexpr int kWidth = 820;
constexpr int kHeight = 520;
constexpr int kLeft = 80;
constexpr int kRight = 30;
constexpr int kTop = 50;
constexpr int kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

}  // namespace

bool write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = x_min;
  double y_max = -x_min;
  for (const PlotSeries& s : series) {
    const size_t n = std::min(s.x.size(), s.y.size());
    for (size_t i = 0; i < n; ++i) {
      if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (!(x_min <= x_max) || !(y_min <= y_max)) return false;
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max == y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  std::ofstream out(path);
  if (!out) return false;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "' font-family='sans-serif' font-size='13'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";

  // Axes and ticks.
  out << "<rect x='" << kLeft << "' y='" << kTop << "' width='" << plot_w << "' height='"
      << plot_h << "' fill='none' stroke='#444'/>\n";
  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double fy = y_min + (y_max - y_min) * i / ticks;
    out << "<line x1='" << px(fx) << "' y1='" << kTop + plot_h << "' x2='" << px(fx) << "' y2='"
        << kTop + plot_h + 5 << "' stroke='#444'/>\n";
    out << "<text x='" << px(fx) << "' y='" << kTop + plot_h + 20 << "' text-anchor='middle'>"
        << num(fx) << "</text>\n";
    out << "<line x1='" << kLeft - 5 << "' y1='" << py(fy) << "' x2='" << kLeft << "' y2='"
        << py(fy) << "' stroke='#444'/>\n";
    out << "<text x='" << kLeft - 8 << "' y='" << py(fy) + 4 << "' text-anchor='end'>" << num(fy)
        << "</text>\n";
  }
  out << "<text x='" << kLeft + plot_w / 2 << "' y='" << kHeight - 12
      << "' text-anchor='middle'>" << x_label << "</text>\n";
  out << "<text x='18' y='" << kTop + plot_h / 2 << "' text-anchor='middle' transform='rotate(-90 18 "
      << kTop + plot_h / 2 << ")'>" << y_label << "</text>\n";

  for (size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    const size_t n = std::min(s.x.size(), s.y.size());
    for (size_t i = 0; i < n; ++i) {
      if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
      out << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
    }
    out << "'/>\n";
    if (!s.label.empty()) {
      const double ly = kTop + 16 + 18 * static_cast<double>(k);
      out << "<line x1='" << kWidth - kRight - 130 << "' y1='" << ly << "' x2='"
          << kWidth - kRight - 105 << "' y2='" << ly << "' stroke='" << color
          << "' stroke-width='2'/>\n";
      out << "<text x='" << kWidth - kRight - 100 << "' y='" << ly + 4 << "'>" << s.label
          << "</text>\n";
    }
  }
  out << "</svg>\n";
  return static_cast<bool>(out);
}

}  // namespace qsim
