#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace qsim {

/// Unit phasor e^{i theta}. Values at integer multiples of pi/2 are snapped to
/// the exact lattice points {1, i, -1, -i} so that quadrature configurations
/// produce exactly real couplings instead of couplings polluted by sin(pi)
/// style rounding noise.
std::complex<double> unit_phasor(double theta);

/// Spin configuration x in {-1,+1}^N. Cheap value type; optimizers mutate
/// their own copy via flip(), everything else treats instances as read-only.
class SpinConfig {
 public:
  explicit SpinConfig(Eigen::VectorXi spins);
  SpinConfig(std::initializer_list<int> spins);

  static SpinConfig all_up(int n);
  static SpinConfig random(int n, std::mt19937_64& rng);

  int size() const { return static_cast<int>(spins_.size()); }
  int operator[](int i) const { return spins_[i]; }
  void flip(int i) { spins_[i] = -spins_[i]; }
  const Eigen::VectorXi& spins() const { return spins_; }

  bool operator==(const SpinConfig& other) const {
    return spins_.size() == other.spins_.size() &&
           (spins_.array() == other.spins_.array()).all();
  }
  /// Lexicographic order, used for deterministic sorting of state lists.
  bool operator<(const SpinConfig& other) const;

  /// Compact text form, e.g. "+-++". parse() accepts the same alphabet.
  std::string to_string() const;
  static SpinConfig parse(const std::string& text);

 private:
  Eigen::VectorXi spins_;
};

/// Diagonal relation matrix A = diag(e^{i theta_l}) acting on the spins.
class RelationMatrix {
 public:
  explicit RelationMatrix(Eigen::VectorXd phases);

  static RelationMatrix identity(int n);
  /// Quadrature matrix: sign +1 maps to phase pi/2 (entry +i), sign -1 to
  /// phase 3pi/2 (entry -i).
  static RelationMatrix quadrature(const std::vector<int>& signs);

  int size() const { return static_cast<int>(phases_.size()); }
  const Eigen::VectorXd& phases() const { return phases_; }
  const Eigen::VectorXcd& entries() const { return entries_; }
  std::complex<double> entry(int l) const { return entries_[l]; }

 private:
  Eigen::VectorXd phases_;
  Eigen::VectorXcd entries_;
};

/// theta-spins y = A x: each binary spin rotated by its per-spin phase.
Eigen::VectorXcd theta_spins(const SpinConfig& x, const RelationMatrix& a);

/// Ising instance with symmetric zero-diagonal couplings, local fields and a
/// constant energy offset carried along so mapped problems (max-cut, vertex
/// cover) report absolute objective values.
struct IsingProblem {
  Eigen::MatrixXd coupling;
  Eigen::VectorXd field;
  double offset = 0.0;

  IsingProblem(Eigen::MatrixXd j, Eigen::VectorXd h, double constant = 0.0);

  int size() const { return static_cast<int>(field.size()); }
};

/// H(x) = -sum_{l<k} J_lk x_l x_k - sum_l h_l x_l + offset.
double hamiltonian(const IsingProblem& p, const SpinConfig& x);

/// Energy change caused by flipping spin i, computed in O(N).
double flip_delta(const IsingProblem& p, const SpinConfig& x, int i);

/// m = (1/N) sum_l x_l.
double magnetization(const SpinConfig& x);

}  // namespace qsim
