#pragma once

#include <optional>
#include <string>

#include "qsim/lattice.hpp"

namespace qsim {

using RealGrid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexGrid =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-spin modulation amplitudes for the two spin sections plus the optional
/// fixed section that realizes external fields. xi/eta have one entry per
/// spin; sigma/z describe fixed blocks whose spins z never change and whose
/// common phase is pi.
struct IntensityProfile {
  Eigen::VectorXd xi;
  Eigen::VectorXd eta;
  Eigen::VectorXd sigma;
  Eigen::VectorXi z;

  IntensityProfile(Eigen::VectorXd xi_amp, Eigen::VectorXd eta_amp);
  IntensityProfile(Eigen::VectorXd xi_amp, Eigen::VectorXd eta_amp,
                   Eigen::VectorXd sigma_amp, Eigen::VectorXi z_fixed);

  static IntensityProfile uniform(int n, double xi_amp, double eta_amp);

  int spins() const { return static_cast<int>(xi.size()); }
  int fixed_blocks() const { return static_cast<int>(sigma.size()); }
  bool has_fixed_section() const { return fixed_blocks() > 0; }
};

/// Placement of one SLM section on the block grid. Units are macropixel
/// blocks, not device pixels.
struct SectionRect {
  int row0 = 0;
  int col0 = 0;
  int rows = 0;
  int cols = 0;

  int capacity() const { return rows * cols; }
};

/// SLM partition and device geometry. Spins are laid out row-major inside
/// each section; section 1 carries amplitudes xi, section 2 carries eta
/// rotated by the relation matrix, section 3 (optional) carries the fixed
/// blocks sigma.
struct OpticsConfig {
  int block_size = 30;
  int pad_factor = 2;
  int grid_rows = 0;
  int grid_cols = 0;
  SectionRect section1;
  SectionRect section2;
  std::optional<SectionRect> section3;

  // Device metadata, carried for reporting only.
  double pixel_pitch_um = 8.0;
  double wavelength_nm = 632.8;

  /// Stacks the sections vertically on a near-square block grid with
  /// margin_blocks empty blocks around the modulated area.
  static OpticsConfig for_spins(int n_spins, int n_fixed = 0, int block_size = 30,
                                int pad_factor = 2, int margin_blocks = 1);

  void validate() const;
};

struct SLMField {
  ComplexGrid grid;
};

struct CcdOptions {
  double noise_sigma = 0.005;  // Gaussian sigma as a fraction of full scale
  int bit_depth = 8;
  int frames = 5;
  // 0 reads the whole frame; r > 0 reads only the centered square of
  // half-width r and leaves the rest of the image at zero.
  int readout_radius = 0;
};

struct CCDImage {
  RealGrid grid;
};

/// Builds the complex field leaving the SLM for spin configuration x.
/// misalignment m shifts the effective aperture: m < 0 drops the last |m|
/// pixel rows and columns of the modulated bounding box (spins falling there
/// go dark), m > 0 adds an m pixel wide uncontrolled border of mean amplitude
/// and zero phase around it.
SLMField synthesize_field(const SpinConfig& x, const RelationMatrix& a,
                          const IntensityProfile& intensities, const OpticsConfig& config,
                          int misalignment = 0);

/// Far-field intensity: zero-pad by config.pad_factor, 2D DFT, centered so
/// the zero-frequency component sits at (rows/2, cols/2) of the result.
RealGrid propagate(const SLMField& field, const OpticsConfig& config);

/// Value of the centered zero-frequency pixel.
double center_intensity(const RealGrid& intensity);

/// Closed-form center intensity |sum_l (xi_l + a_l eta_l) x_l + F|^2 with
/// F = sum_m sigma_m z_m e^{i pi}. Reference path for validating the DFT.
double center_intensity_analytic(const SpinConfig& x, const RelationMatrix& a,
                                 const IntensityProfile& intensities);

/// Camera model: per frame adds Gaussian noise (sigma relative to the ideal
/// image full scale), clamps negatives, quantizes on a 2^bit_depth level
/// lattice whose top level is the ideal full scale (brighter noise saturates),
/// then averages the frames. The exposure reference is the ideal image, like
/// a camera that fixes its gain on the scene rather than per shot, so each
/// output pixel depends only on its own noise draws.
CCDImage detect(const RealGrid& intensity, const CcdOptions& options, std::mt19937_64& rng);

void write_pgm(const std::string& path, const RealGrid& image);
void write_phase_pgm(const std::string& path, const ComplexGrid& field);

}  // namespace qsim
