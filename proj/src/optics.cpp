#include "qsim/optics.hpp"

#include <fftw3.h>

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace qsim {

namespace {

// FFTW plan creation and destruction are not thread safe; executing distinct
// plans is. Plans are cached per thread and guarded here during setup.
std::mutex fftw_setup_mutex;

class Fft2D {
 public:
  Fft2D(int rows, int cols) : rows_(rows), cols_(cols) {
    const size_t count = static_cast<size_t>(rows) * static_cast<size_t>(cols);
    in_ = fftw_alloc_complex(count);
    out_ = fftw_alloc_complex(count);
    if (!in_ || !out_) throw std::runtime_error("Fft2D: allocation failed");
    std::lock_guard<std::mutex> lock(fftw_setup_mutex);
    plan_ = fftw_plan_dft_2d(rows, cols, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("Fft2D: plan creation failed");
  }

  ~Fft2D() {
    {
      std::lock_guard<std::mutex> lock(fftw_setup_mutex);
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }

  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  // Intensity |DFT|^2 with the zero-frequency bin moved to the grid center.
  RealGrid forward_intensity(const ComplexGrid& padded) {
    auto* in = reinterpret_cast<std::complex<double>*>(in_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) in[static_cast<size_t>(r) * cols_ + c] = padded(r, c);
    fftw_execute(plan_);
    RealGrid intensity(rows_, cols_);
    const int sr = (rows_ + 1) / 2;
    const int sc = (cols_ + 1) / 2;
    auto* out = reinterpret_cast<std::complex<double>*>(out_);
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) {
        const std::complex<double> v =
            out[static_cast<size_t>((r + sr) % rows_) * cols_ + (c + sc) % cols_];
        intensity(r, c) = std::norm(v);
      }
    }
    return intensity;
  }

 private:
  int rows_, cols_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

Fft2D& cached_fft(int rows, int cols) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Fft2D>> cache;
  auto& slot = cache[{rows, cols}];
  if (!slot) slot = std::make_unique<Fft2D>(rows, cols);
  return *slot;
}

bool rects_overlap(const SectionRect& a, const SectionRect& b) {
  const bool row_gap = a.row0 + a.rows <= b.row0 || b.row0 + b.rows <= a.row0;
  const bool col_gap = a.col0 + a.cols <= b.col0 || b.col0 + b.cols <= a.col0;
  return !(row_gap || col_gap);
}

void check_rect(const SectionRect& s, const OpticsConfig& cfg, const char* name) {
  if (s.rows < 1 || s.cols < 1 || s.row0 < 0 || s.col0 < 0)
    throw std::invalid_argument(std::string("OpticsConfig: malformed ") + name);
  if ((s.row0 + s.rows) * cfg.block_size > cfg.grid_rows ||
      (s.col0 + s.cols) * cfg.block_size > cfg.grid_cols)
    throw std::invalid_argument(std::string("OpticsConfig: ") + name + " outside grid");
}

struct PixelRect {
  int r0, c0, rows, cols;
};

PixelRect to_pixels(const SectionRect& s, int block_size) {
  return {s.row0 * block_size, s.col0 * block_size, s.rows * block_size, s.cols * block_size};
}

PixelRect union_rect(const PixelRect& a, const PixelRect& b) {
  const int r0 = std::min(a.r0, b.r0);
  const int c0 = std::min(a.c0, b.c0);
  const int r1 = std::max(a.r0 + a.rows, b.r0 + b.rows);
  const int c1 = std::max(a.c0 + a.cols, b.c0 + b.cols);
  return {r0, c0, r1 - r0, c1 - c0};
}

}  // namespace

IntensityProfile::IntensityProfile(Eigen::VectorXd xi_amp, Eigen::VectorXd eta_amp)
    : IntensityProfile(std::move(xi_amp), std::move(eta_amp), Eigen::VectorXd(),
                       Eigen::VectorXi()) {}

IntensityProfile::IntensityProfile(Eigen::VectorXd xi_amp, Eigen::VectorXd eta_amp,
                                   Eigen::VectorXd sigma_amp, Eigen::VectorXi z_fixed)
    : xi(std::move(xi_amp)), eta(std::move(eta_amp)), sigma(std::move(sigma_amp)),
      z(std::move(z_fixed)) {
  if (xi.size() == 0) throw std::invalid_argument("IntensityProfile: no spins");
  if (xi.size() != eta.size())
    throw std::invalid_argument("IntensityProfile: xi/eta size mismatch");
  if (sigma.size() != z.size())
    throw std::invalid_argument("IntensityProfile: sigma/z size mismatch");
  if ((xi.array() < 0).any() || (eta.array() < 0).any() || (sigma.array() < 0).any())
    throw std::invalid_argument("IntensityProfile: amplitudes must be non-negative");
  for (int i = 0; i < z.size(); ++i)
    if (z[i] != 1 && z[i] != -1)
      throw std::invalid_argument("IntensityProfile: fixed spins must be +1 or -1");
}

IntensityProfile IntensityProfile::uniform(int n, double xi_amp, double eta_amp) {
  if (n <= 0) throw std::invalid_argument("IntensityProfile: size must be positive");
  return IntensityProfile(Eigen::VectorXd::Constant(n, xi_amp),
                          Eigen::VectorXd::Constant(n, eta_amp));
}

OpticsConfig OpticsConfig::for_spins(int n_spins, int n_fixed, int block_size, int pad_factor,
                                     int margin_blocks) {
  if (n_spins < 1) throw std::invalid_argument("OpticsConfig: need at least one spin");
  if (n_fixed < 0) throw std::invalid_argument("OpticsConfig: negative fixed block count");
  if (margin_blocks < 0) throw std::invalid_argument("OpticsConfig: negative margin");
  OpticsConfig cfg;
  cfg.block_size = block_size;
  cfg.pad_factor = pad_factor;
  const int cols_b = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_spins))));
  const int rows_b = (n_spins + cols_b - 1) / cols_b;
  cfg.section1 = {margin_blocks, margin_blocks, rows_b, cols_b};
  cfg.section2 = {margin_blocks + rows_b, margin_blocks, rows_b, cols_b};
  int rows3 = 0;
  if (n_fixed > 0) {
    const int cols3 = std::min(n_fixed, cols_b);
    rows3 = (n_fixed + cols3 - 1) / cols3;
    cfg.section3 = SectionRect{margin_blocks + 2 * rows_b, margin_blocks, rows3, cols3};
  }
  cfg.grid_rows = (2 * rows_b + rows3 + 2 * margin_blocks) * block_size;
  cfg.grid_cols = (cols_b + 2 * margin_blocks) * block_size;
  cfg.validate();
  return cfg;
}

void OpticsConfig::validate() const {
  if (block_size < 1) throw std::invalid_argument("OpticsConfig: block_size must be >= 1");
  if (pad_factor < 1) throw std::invalid_argument("OpticsConfig: pad_factor must be >= 1");
  if (grid_rows < block_size || grid_cols < block_size)
    throw std::invalid_argument("OpticsConfig: grid smaller than one block");
  check_rect(section1, *this, "section1");
  check_rect(section2, *this, "section2");
  if (rects_overlap(section1, section2))
    throw std::invalid_argument("OpticsConfig: sections 1 and 2 overlap");
  if (section3) {
    check_rect(*section3, *this, "section3");
    if (rects_overlap(section1, *section3) || rects_overlap(section2, *section3))
      throw std::invalid_argument("OpticsConfig: section 3 overlaps a spin section");
  }
}

SLMField synthesize_field(const SpinConfig& x, const RelationMatrix& a,
                          const IntensityProfile& intensities, const OpticsConfig& config,
                          int misalignment) {
  config.validate();
  const int n = x.size();
  if (a.size() != n || intensities.spins() != n)
    throw std::invalid_argument("synthesize_field: spin/profile/relation size mismatch");
  if (config.section1.capacity() < n || config.section2.capacity() < n)
    throw std::invalid_argument("synthesize_field: sections too small for spin count");
  if (intensities.has_fixed_section()) {
    if (!config.section3)
      throw std::invalid_argument("synthesize_field: profile needs a third section");
    if (config.section3->capacity() < intensities.fixed_blocks())
      throw std::invalid_argument("synthesize_field: section 3 too small");
  }

  SLMField field{ComplexGrid::Zero(config.grid_rows, config.grid_cols)};
  const int bs = config.block_size;
  auto fill_block = [&](const SectionRect& sec, int index, std::complex<double> value) {
    const int br = index / sec.cols;
    const int bc = index % sec.cols;
    field.grid.block((sec.row0 + br) * bs, (sec.col0 + bc) * bs, bs, bs).setConstant(value);
  };

  for (int l = 0; l < n; ++l) {
    const double spin = static_cast<double>(x[l]);
    fill_block(config.section1, l, intensities.xi[l] * spin);
    fill_block(config.section2, l, a.entry(l) * intensities.eta[l] * spin);
  }
  // Fixed blocks modulate amplitude sigma at phase pi, flipped by z.
  for (int m = 0; m < intensities.fixed_blocks(); ++m)
    fill_block(*config.section3, m,
               -intensities.sigma[m] * static_cast<double>(intensities.z[m]));

  if (misalignment != 0) {
    PixelRect box = union_rect(to_pixels(config.section1, bs), to_pixels(config.section2, bs));
    if (intensities.has_fixed_section())
      box = union_rect(box, to_pixels(*config.section3, bs));
    if (misalignment < 0) {
      const int cut = -misalignment;
      if (cut >= box.rows || cut >= box.cols)
        throw std::invalid_argument("synthesize_field: misalignment exceeds modulated area");
      field.grid.block(box.r0 + box.rows - cut, box.c0, cut, box.cols).setZero();
      field.grid.block(box.r0, box.c0 + box.cols - cut, box.rows, cut).setZero();
    } else {
      const int m = misalignment;
      if (box.r0 < m || box.c0 < m || box.r0 + box.rows + m > config.grid_rows ||
          box.c0 + box.cols + m > config.grid_cols)
        throw std::invalid_argument("synthesize_field: misalignment border leaves the grid");
      const double mean_amp =
          field.grid.block(box.r0, box.c0, box.rows, box.cols).cwiseAbs().mean();
      field.grid.block(box.r0 - m, box.c0 - m, m, box.cols + 2 * m).setConstant(mean_amp);
      field.grid.block(box.r0 + box.rows, box.c0 - m, m, box.cols + 2 * m)
          .setConstant(mean_amp);
      field.grid.block(box.r0, box.c0 - m, box.rows, m).setConstant(mean_amp);
      field.grid.block(box.r0, box.c0 + box.cols, box.rows, m).setConstant(mean_amp);
    }
  }
  return field;
}

RealGrid propagate(const SLMField& field, const OpticsConfig& config) {
  if (field.grid.rows() == 0 || field.grid.cols() == 0)
    throw std::invalid_argument("propagate: empty field");
  const int rows_p = static_cast<int>(field.grid.rows()) * config.pad_factor;
  const int cols_p = static_cast<int>(field.grid.cols()) * config.pad_factor;
  ComplexGrid padded = ComplexGrid::Zero(rows_p, cols_p);
  padded.topLeftCorner(field.grid.rows(), field.grid.cols()) = field.grid;
  return cached_fft(rows_p, cols_p).forward_intensity(padded);
}

double center_intensity(const RealGrid& intensity) {
  if (intensity.rows() == 0 || intensity.cols() == 0)
    throw std::invalid_argument("center_intensity: empty image");
  return intensity(intensity.rows() / 2, intensity.cols() / 2);
}

double center_intensity_analytic(const SpinConfig& x, const RelationMatrix& a,
                                 const IntensityProfile& intensities) {
  const int n = x.size();
  if (a.size() != n || intensities.spins() != n)
    throw std::invalid_argument("center_intensity_analytic: size mismatch");
  std::complex<double> sum(0.0, 0.0);
  for (int l = 0; l < n; ++l) {
    const double spin = static_cast<double>(x[l]);
    sum += (intensities.xi[l] + a.entry(l) * intensities.eta[l]) * spin;
  }
  for (int m = 0; m < intensities.fixed_blocks(); ++m)
    sum -= intensities.sigma[m] * static_cast<double>(intensities.z[m]);
  return std::norm(sum);
}

CCDImage detect(const RealGrid& intensity, const CcdOptions& options, std::mt19937_64& rng) {
  if (intensity.rows() == 0 || intensity.cols() == 0)
    throw std::invalid_argument("detect: empty image");
  if (options.frames < 1) throw std::invalid_argument("detect: frames must be >= 1");
  if (options.bit_depth < 1 || options.bit_depth > 16)
    throw std::invalid_argument("detect: bit_depth out of range");
  if (options.noise_sigma < 0) throw std::invalid_argument("detect: negative noise sigma");
  if (options.readout_radius < 0)
    throw std::invalid_argument("detect: negative readout radius");

  const int rows = static_cast<int>(intensity.rows());
  const int cols = static_cast<int>(intensity.cols());
  CCDImage image{RealGrid::Zero(rows, cols)};
  const double full_scale = intensity.maxCoeff();
  if (full_scale <= 0.0) return image;

  // Readout window, the full frame unless a radius is set.
  int r0 = 0, r1 = rows - 1, c0 = 0, c1 = cols - 1;
  if (options.readout_radius > 0) {
    r0 = std::max(0, rows / 2 - options.readout_radius);
    r1 = std::min(rows - 1, rows / 2 + options.readout_radius);
    c0 = std::max(0, cols / 2 - options.readout_radius);
    c1 = std::min(cols - 1, cols / 2 + options.readout_radius);
  }

  const double levels = static_cast<double>((1 << options.bit_depth) - 1);
  const double step = full_scale / levels;
  const double sigma = options.noise_sigma * full_scale;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int f = 0; f < options.frames; ++f) {
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        double v = intensity(r, c);
        if (sigma > 0.0) v = std::max(0.0, v + sigma * gauss(rng));
        image.grid(r, c) += std::min(std::round(v / step), levels) * step;
      }
    }
  }
  image.grid /= static_cast<double>(options.frames);
  return image;
}

void write_pgm(const std::string& path, const RealGrid& image) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  const double peak = image.size() > 0 ? image.maxCoeff() : 0.0;
  out << "P2\n" << image.cols() << " " << image.rows() << "\n255\n";
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      const int v = peak > 0.0 ? static_cast<int>(std::lround(image(r, c) / peak * 255.0)) : 0;
      out << std::min(255, std::max(0, v)) << (c + 1 == image.cols() ? '\n' : ' ');
    }
  }
}

void write_phase_pgm(const std::string& path, const ComplexGrid& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_phase_pgm: cannot open " + path);
  out << "P2\n" << field.cols() << " " << field.rows() << "\n255\n";
  for (int r = 0; r < field.rows(); ++r) {
    for (int c = 0; c < field.cols(); ++c) {
      const double phase = std::arg(field(r, c));
      const int v = static_cast<int>(std::lround((phase + M_PI) / (2.0 * M_PI) * 255.0));
      out << std::min(255, std::max(0, v)) << (c + 1 == field.cols() ? '\n' : ' ');
    }
  }
}

}  // namespace qsim
