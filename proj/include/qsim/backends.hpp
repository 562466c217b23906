#pragma once

#include <memory>
#include <vector>

#include "qsim/coupling.hpp"
#include "qsim/target_image.hpp"

namespace qsim {

/// Objective provider for the feedback loop. Backends hold a current spin
/// configuration; the loop asks for the objective of the current state, of a
/// flipped candidate, and commits accepted flips. All objectives are
/// minimized. Stochastic backends return a fresh noisy measurement from
/// current() on every call.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual int size() const = 0;
  virtual bool stochastic() const { return false; }
  virtual void reset(const SpinConfig& x) = 0;
  virtual double current() = 0;
  virtual double candidate(const std::vector<int>& flips) = 0;
  virtual void commit(const std::vector<int>& flips) = 0;

  /// Exact Ising energy of the committed state under the backend's problem,
  /// independent of measurement noise. Used for trace reporting.
  virtual double energy() const = 0;
};

/// Minimizes the Hamiltonian directly with cached local fields: O(1)
/// single-flip proposals, O(N) commits.
class DirectBackend : public Backend {
 public:
  explicit DirectBackend(IsingProblem problem);

  int size() const override { return problem_.size(); }
  void reset(const SpinConfig& x) override;
  double current() override { return energy_; }
  double candidate(const std::vector<int>& flips) override;
  void commit(const std::vector<int>& flips) override;
  double energy() const override { return energy_; }

  const SpinConfig& state() const { return x_; }

 private:
  IsingProblem problem_;
  SpinConfig x_;
  Eigen::VectorXd fields_;  // fields_[i] = sum_k J_ik x_k
  double energy_ = 0.0;
};

/// Minimizes -I(0,0) using the closed-form center intensity. The running
/// complex sum of modulated amplitudes makes proposals O(flips).
class AnalyticBackend : public Backend {
 public:
  AnalyticBackend(IntensityProfile intensities, RelationMatrix relation);

  int size() const override { return static_cast<int>(c_.size()); }
  void reset(const SpinConfig& x) override;
  double current() override;
  double candidate(const std::vector<int>& flips) override;
  void commit(const std::vector<int>& flips) override;
  double energy() const override;

  const SpinConfig& state() const { return x_; }

 private:
  std::complex<double> shifted_sum(const std::vector<int>& flips) const;
  void refresh_sum();

  IntensityProfile intensities_;
  RelationMatrix relation_;
  Eigen::VectorXcd c_;
  double fixed_term_ = 0.0;  // F = -sum_m sigma_m z_m
  double diag_term_ = 0.0;   // sum_l |c_l|^2 + F^2
  std::complex<double> sum_{0.0, 0.0};
  SpinConfig x_;
  long commits_ = 0;
};

/// Full simulated machine: every evaluation synthesizes the SLM field,
/// propagates it, detects it with camera noise and quantization, and scores
/// the image against the feedback target. The detected window is scaled to
/// unit maximum before the distance so the objective is invariant to the
/// overall intensity scale. Stochastic unless the camera noise is zero.
class OpticalBackend : public Backend {
 public:
  OpticalBackend(IntensityProfile intensities, RelationMatrix relation, OpticsConfig config,
                 CcdOptions camera, TargetImage target, uint64_t noise_seed,
                 int misalignment = 0);

  int size() const override { return static_cast<int>(c_.size()); }
  bool stochastic() const override { return camera_.noise_sigma > 0.0; }
  void reset(const SpinConfig& x) override;
  double current() override { return measure(x_); }
  double candidate(const std::vector<int>& flips) override;
  void commit(const std::vector<int>& flips) override;
  double energy() const override;

  const SpinConfig& state() const { return x_; }
  long measurements() const { return measurements_; }

  /// Camera image of the committed state, for diagnostics dumps.
  CCDImage snapshot();

 private:
  double measure(const SpinConfig& x);

  IntensityProfile intensities_;
  RelationMatrix relation_;
  OpticsConfig config_;
  CcdOptions camera_;
  TargetImage target_;
  int misalignment_ = 0;
  std::mt19937_64 rng_;
  Eigen::VectorXcd c_;
  double fixed_term_ = 0.0;
  double diag_term_ = 0.0;
  SpinConfig x_;
  long measurements_ = 0;
};

}  // namespace qsim
