#include "qsim/target_image.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

TargetImage make_target_image(const TargetOptions& options) {
  if (options.rows < 1 || options.cols < 1)
    throw std::invalid_argument("make_target_image: empty image");
  if (options.steps < 1) throw std::invalid_argument("make_target_image: steps must be >= 1");
  if (options.peak <= 0.0) throw std::invalid_argument("make_target_image: peak must be > 0");
  if (options.window_radius < 1)
    throw std::invalid_argument("make_target_image: window_radius must be >= 1");
  if (2 * options.window_radius + 1 > options.rows ||
      2 * options.window_radius + 1 > options.cols)
    throw std::invalid_argument("make_target_image: window larger than image");

  TargetImage target{RealGrid::Zero(options.rows, options.cols), options.window_radius};
  const int cr = options.rows / 2;
  const int cc = options.cols / 2;
  const double ring_width =
      static_cast<double>(options.window_radius) / static_cast<double>(options.steps);
  for (int r = 0; r < options.rows; ++r) {
    for (int c = 0; c < options.cols; ++c) {
      const int d = std::max(std::abs(r - cr), std::abs(c - cc));
      if (d > options.window_radius) continue;
      int ring = static_cast<int>(std::floor(static_cast<double>(d) / ring_width));
      ring = std::min(ring, options.steps - 1);
      target.grid(r, c) =
          options.peak * static_cast<double>(options.steps - ring) / options.steps;
    }
  }
  return target;
}

TargetImage target_for_config(const OpticsConfig& cfg, int steps, double peak,
                              int window_radius) {
  TargetOptions opt;
  opt.rows = cfg.grid_rows * cfg.pad_factor;
  opt.cols = cfg.grid_cols * cfg.pad_factor;
  opt.steps = steps;
  opt.peak = peak;
  opt.window_radius = window_radius;
  return make_target_image(opt);
}

double image_distance(const RealGrid& image, const TargetImage& target) {
  if (image.rows() != target.grid.rows() || image.cols() != target.grid.cols())
    throw std::invalid_argument("image_distance: image/target shape mismatch");
  const int cr = static_cast<int>(image.rows()) / 2;
  const int cc = static_cast<int>(image.cols()) / 2;
  const int rad = target.window_radius;
  double sum = 0.0;
  for (int r = cr - rad; r <= cr + rad; ++r)
    for (int c = cc - rad; c <= cc + rad; ++c) {
      const double d = image(r, c) - target.grid(r, c);
      sum += d * d;
    }
  return std::sqrt(sum);
}

}  // namespace qsim
