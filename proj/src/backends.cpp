#include "qsim/backends.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

namespace {

Eigen::VectorXcd combined(const IntensityProfile& p, const RelationMatrix& a) {
  if (p.spins() != a.size())
    throw std::invalid_argument("backend: profile/relation size mismatch");
  Eigen::VectorXcd c(p.spins());
  for (int l = 0; l < p.spins(); ++l) c[l] = p.xi[l] + a.entry(l) * p.eta[l];
  return c;
}

double fixed_sum(const IntensityProfile& p) {
  double f = 0.0;
  for (int m = 0; m < p.fixed_blocks(); ++m)
    f -= p.sigma[m] * static_cast<double>(p.z[m]);
  return f;
}

void check_flips(const std::vector<int>& flips, int n) {
  if (flips.empty()) throw std::invalid_argument("backend: empty flip set");
  for (int i : flips)
    if (i < 0 || i >= n) throw std::invalid_argument("backend: flip index out of range");
}

}  // namespace

DirectBackend::DirectBackend(IsingProblem problem)
    : problem_(std::move(problem)), x_(SpinConfig::all_up(problem_.size())) {}

void DirectBackend::reset(const SpinConfig& x) {
  if (x.size() != problem_.size())
    throw std::invalid_argument("DirectBackend: configuration size mismatch");
  x_ = x;
  const Eigen::VectorXd xd = x_.spins().cast<double>();
  fields_ = problem_.coupling * xd;
  energy_ = hamiltonian(problem_, x_);
}

double DirectBackend::candidate(const std::vector<int>& flips) {
  check_flips(flips, size());
  double delta = 0.0;
  for (size_t a = 0; a < flips.size(); ++a) {
    const int i = flips[a];
    delta += 2.0 * x_[i] * (fields_[i] + problem_.field[i]);
    // Pairs inside the flip set keep their product, so remove the double
    // counted interaction term.
    for (size_t b = a + 1; b < flips.size(); ++b) {
      const int j = flips[b];
      delta -= 4.0 * problem_.coupling(i, j) * x_[i] * x_[j];
    }
  }
  return energy_ + delta;
}

void DirectBackend::commit(const std::vector<int>& flips) {
  const double next = candidate(flips);
  for (int i : flips) {
    const double step = -2.0 * static_cast<double>(x_[i]);
    fields_ += problem_.coupling.col(i) * step;
    x_.flip(i);
  }
  energy_ = next;
}

AnalyticBackend::AnalyticBackend(IntensityProfile intensities, RelationMatrix relation)
    : intensities_(std::move(intensities)), relation_(std::move(relation)),
      c_(combined(intensities_, relation_)), fixed_term_(fixed_sum(intensities_)),
      x_(SpinConfig::all_up(static_cast<int>(c_.size()))) {
  diag_term_ = c_.squaredNorm() + fixed_term_ * fixed_term_;
}

void AnalyticBackend::reset(const SpinConfig& x) {
  if (x.size() != size())
    throw std::invalid_argument("AnalyticBackend: configuration size mismatch");
  x_ = x;
  refresh_sum();
  commits_ = 0;
}

void AnalyticBackend::refresh_sum() {
  sum_ = {0.0, 0.0};
  for (int l = 0; l < size(); ++l) sum_ += c_[l] * static_cast<double>(x_[l]);
}

double AnalyticBackend::current() {
  return -std::norm(sum_ + fixed_term_);
}

std::complex<double> AnalyticBackend::shifted_sum(const std::vector<int>& flips) const {
  std::complex<double> s = sum_;
  for (int i : flips) s -= 2.0 * static_cast<double>(x_[i]) * c_[i];
  return s;
}

double AnalyticBackend::candidate(const std::vector<int>& flips) {
  check_flips(flips, size());
  return -std::norm(shifted_sum(flips) + fixed_term_);
}

void AnalyticBackend::commit(const std::vector<int>& flips) {
  check_flips(flips, size());
  sum_ = shifted_sum(flips);
  for (int i : flips) x_.flip(i);
  // Periodic exact refresh bounds floating point drift on long runs.
  if (++commits_ % 4096 == 0) refresh_sum();
}

double AnalyticBackend::energy() const {
  return diag_term_ - std::norm(sum_ + fixed_term_);
}

OpticalBackend::OpticalBackend(IntensityProfile intensities, RelationMatrix relation,
                               OpticsConfig config, CcdOptions camera, TargetImage target,
                               uint64_t noise_seed, int misalignment)
    : intensities_(std::move(intensities)), relation_(std::move(relation)),
      config_(std::move(config)), camera_(camera), target_(std::move(target)),
      misalignment_(misalignment), rng_(noise_seed),
      c_(combined(intensities_, relation_)), fixed_term_(fixed_sum(intensities_)),
      x_(SpinConfig::all_up(static_cast<int>(c_.size()))) {
  diag_term_ = c_.squaredNorm() + fixed_term_ * fixed_term_;
  config_.validate();
  if (target_.grid.rows() != config_.grid_rows * config_.pad_factor ||
      target_.grid.cols() != config_.grid_cols * config_.pad_factor)
    throw std::invalid_argument("OpticalBackend: target does not match propagated image size");
}

void OpticalBackend::reset(const SpinConfig& x) {
  if (x.size() != size())
    throw std::invalid_argument("OpticalBackend: configuration size mismatch");
  x_ = x;
  measurements_ = 0;
}

double OpticalBackend::measure(const SpinConfig& x) {
  ++measurements_;
  SLMField field = synthesize_field(x, relation_, intensities_, config_, misalignment_);
  RealGrid far = propagate(field, config_);
  // The objective only looks at the target window, so the camera reads just
  // that region. Snapshots still capture the whole frame.
  CcdOptions camera = camera_;
  if (camera.readout_radius == 0) camera.readout_radius = target_.window_radius;
  CCDImage ccd = detect(far, camera, rng_);

  const int cr = static_cast<int>(ccd.grid.rows()) / 2;
  const int cc = static_cast<int>(ccd.grid.cols()) / 2;
  const int rad = target_.window_radius;
  double window_max = 0.0;
  for (int r = cr - rad; r <= cr + rad; ++r)
    for (int c = cc - rad; c <= cc + rad; ++c) window_max = std::max(window_max, ccd.grid(r, c));
  if (window_max > 0.0) ccd.grid /= window_max;
  return image_distance(ccd.grid, target_);
}

double OpticalBackend::candidate(const std::vector<int>& flips) {
  check_flips(flips, size());
  SpinConfig flipped = x_;
  for (int i : flips) flipped.flip(i);
  return measure(flipped);
}

void OpticalBackend::commit(const std::vector<int>& flips) {
  check_flips(flips, size());
  for (int i : flips) x_.flip(i);
}

double OpticalBackend::energy() const {
  std::complex<double> sum(0.0, 0.0);
  for (int l = 0; l < size(); ++l) sum += c_[l] * static_cast<double>(x_[l]);
  return diag_term_ - std::norm(sum + fixed_term_);
}

CCDImage OpticalBackend::snapshot() {
  SLMField field = synthesize_field(x_, relation_, intensities_, config_, misalignment_);
  return detect(propagate(field, config_), camera_, rng_);
}

}  // namespace qsim
