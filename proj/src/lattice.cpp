#include "qsim/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

std::complex<double> unit_phasor(double theta) {
  const double half_turns = theta / (M_PI / 2.0);
  const double nearest = std::round(half_turns);
  if (std::abs(half_turns - nearest) < 1e-12) {
    switch (((static_cast<long long>(nearest) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return {std::cos(theta), std::sin(theta)};
}

SpinConfig::SpinConfig(Eigen::VectorXi spins) : spins_(std::move(spins)) {
  if (spins_.size() == 0) throw std::invalid_argument("SpinConfig: empty configuration");
  for (int i = 0; i < spins_.size(); ++i) {
    if (spins_[i] != 1 && spins_[i] != -1)
      throw std::invalid_argument("SpinConfig: entries must be +1 or -1");
  }
}

SpinConfig::SpinConfig(std::initializer_list<int> spins)
    : SpinConfig(Eigen::Map<const Eigen::VectorXi>(spins.begin(),
                                                   static_cast<int>(spins.size()))) {}

SpinConfig SpinConfig::all_up(int n) {
  if (n <= 0) throw std::invalid_argument("SpinConfig: size must be positive");
  return SpinConfig(Eigen::VectorXi::Ones(n));
}

SpinConfig SpinConfig::random(int n, std::mt19937_64& rng) {
  if (n <= 0) throw std::invalid_argument("SpinConfig: size must be positive");
  Eigen::VectorXi s(n);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < n; ++i) s[i] = coin(rng) ? 1 : -1;
  return SpinConfig(std::move(s));
}

bool SpinConfig::operator<(const SpinConfig& other) const {
  if (spins_.size() != other.spins_.size())
    return spins_.size() < other.spins_.size();
  for (int i = 0; i < spins_.size(); ++i) {
    if (spins_[i] != other.spins_[i]) return spins_[i] < other.spins_[i];
  }
  return false;
}

std::string SpinConfig::to_string() const {
  std::string out(spins_.size(), '+');
  for (int i = 0; i < spins_.size(); ++i)
    if (spins_[i] < 0) out[i] = '-';
  return out;
}

SpinConfig SpinConfig::parse(const std::string& text) {
  Eigen::VectorXi s(static_cast<int>(text.size()));
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '+') s[static_cast<int>(i)] = 1;
    else if (text[i] == '-') s[static_cast<int>(i)] = -1;
    else throw std::invalid_argument("SpinConfig: unexpected character in spin string");
  }
  return SpinConfig(std::move(s));
}

RelationMatrix::RelationMatrix(Eigen::VectorXd phases) : phases_(std::move(phases)) {
  if (phases_.size() == 0) throw std::invalid_argument("RelationMatrix: empty phase vector");
  entries_.resize(phases_.size());
  for (int i = 0; i < phases_.size(); ++i) entries_[i] = unit_phasor(phases_[i]);
}

RelationMatrix RelationMatrix::identity(int n) {
  return RelationMatrix(Eigen::VectorXd::Zero(n));
}

RelationMatrix RelationMatrix::quadrature(const std::vector<int>& signs) {
  Eigen::VectorXd phases(static_cast<int>(signs.size()));
  for (size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1)
      throw std::invalid_argument("RelationMatrix: quadrature signs must be +1 or -1");
    phases[static_cast<int>(i)] = signs[i] > 0 ? M_PI / 2.0 : 3.0 * M_PI / 2.0;
  }
  return RelationMatrix(std::move(phases));
}

Eigen::VectorXcd theta_spins(const SpinConfig& x, const RelationMatrix& a) {
  if (x.size() != a.size())
    throw std::invalid_argument("theta_spins: spin/relation size mismatch");
  Eigen::VectorXcd y(x.size());
  for (int i = 0; i < x.size(); ++i) y[i] = a.entry(i) * static_cast<double>(x[i]);
  return y;
}

IsingProblem::IsingProblem(Eigen::MatrixXd j, Eigen::VectorXd h, double constant)
    : coupling(std::move(j)), field(std::move(h)), offset(constant) {
  if (coupling.rows() != coupling.cols())
    throw std::invalid_argument("IsingProblem: coupling matrix must be square");
  if (coupling.rows() != field.size())
    throw std::invalid_argument("IsingProblem: coupling/field size mismatch");
  for (int i = 0; i < coupling.rows(); ++i) {
    if (coupling(i, i) != 0.0)
      throw std::invalid_argument("IsingProblem: coupling diagonal must be zero");
    for (int k = i + 1; k < coupling.cols(); ++k) {
      const double diff = std::abs(coupling(i, k) - coupling(k, i));
      const double scale = std::max(1.0, std::abs(coupling(i, k)));
      if (diff > 1e-9 * scale)
        throw std::invalid_argument("IsingProblem: coupling matrix must be symmetric");
    }
  }
}

double hamiltonian(const IsingProblem& p, const SpinConfig& x) {
  if (p.size() != x.size())
    throw std::invalid_argument("hamiltonian: problem/config size mismatch");
  double pair_sum = 0.0;
  for (int l = 0; l < p.size(); ++l) {
    for (int k = l + 1; k < p.size(); ++k)
      pair_sum += p.coupling(l, k) * x[l] * x[k];
  }
  double field_sum = 0.0;
  for (int l = 0; l < p.size(); ++l) field_sum += p.field[l] * x[l];
  return -pair_sum - field_sum + p.offset;
}

double flip_delta(const IsingProblem& p, const SpinConfig& x, int i) {
  if (i < 0 || i >= p.size()) throw std::invalid_argument("flip_delta: index out of range");
  double local = p.field[i];
  for (int k = 0; k < p.size(); ++k) local += p.coupling(i, k) * x[k];
  return 2.0 * x[i] * local;
}

double magnetization(const SpinConfig& x) {
  return x.spins().sum() / static_cast<double>(x.size());
}

}  // namespace qsim
