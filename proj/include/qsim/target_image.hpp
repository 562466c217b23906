#pragma once

#include "qsim/optics.hpp"

namespace qsim {

struct TargetOptions {
  int rows = 0;
  int cols = 0;
  int steps = 4;
  double peak = 1.0;
  int window_radius = 6;
};

/// Feedback target for the camera image: concentric square rings around the
/// zero-frequency pixel, stepping down from peak to zero over window_radius
/// pixels, zero outside. Radially non-increasing by construction, so pushing
/// the measured image towards it concentrates light in the center.
struct TargetImage {
  RealGrid grid;
  int window_radius = 0;
};

TargetImage make_target_image(const TargetOptions& options);

/// Target sized for the far-field image produced by propagate() under cfg.
TargetImage target_for_config(const OpticsConfig& cfg, int steps = 4, double peak = 1.0,
                              int window_radius = 6);

/// Plain L2 distance between image and target over the square window of
/// half-width window_radius around the center pixel. No normalization is
/// applied here; callers decide how to scale the image first.
double image_distance(const RealGrid& image, const TargetImage& target);

}  // namespace qsim
