#include "qsim/coupling.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qsim {

namespace {

Eigen::VectorXcd combined_amplitudes(const IntensityProfile& p, const RelationMatrix& a) {
  if (p.spins() != a.size())
    throw std::invalid_argument("coupling: profile/relation size mismatch");
  Eigen::VectorXcd c(p.spins());
  for (int l = 0; l < p.spins(); ++l) c[l] = p.xi[l] + a.entry(l) * p.eta[l];
  return c;
}

void check_target(const Eigen::MatrixXd& j) {
  if (j.rows() != j.cols() || j.rows() < 2)
    throw std::invalid_argument("fit_intensities: target must be square, n >= 2");
  for (int l = 0; l < j.rows(); ++l)
    for (int k = l + 1; k < j.cols(); ++k) {
      const double scale = std::max(1.0, std::abs(j(l, k)));
      if (std::abs(j(l, k) - j(k, l)) > 1e-9 * scale)
        throw std::invalid_argument("fit_intensities: target must be symmetric");
    }
}

double offdiag_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double sum = 0.0;
  for (int l = 0; l < a.rows(); ++l)
    for (int k = 0; k < a.cols(); ++k)
      if (l != k) sum += (a(l, k) - b(l, k)) * (a(l, k) - b(l, k));
  return std::sqrt(sum);
}

FitResult make_fit(Eigen::VectorXd xi, Eigen::VectorXd eta, const std::vector<int>& signs,
                   const Eigen::MatrixXd& j_target) {
  IntensityProfile profile(std::move(xi), std::move(eta));
  RelationMatrix relation = RelationMatrix::quadrature(signs);
  Eigen::MatrixXd achieved = effective_coupling(profile, relation);
  const double residual = offdiag_residual(j_target, achieved);
  return FitResult{std::move(profile), std::move(relation), std::move(achieved), residual};
}

// Exact handling of targets whose off-diagonal is a constant c > 0 inside
// one or two groups and zero across: representable with xi = eta = sqrt(c)/2
// and quadrature signs identifying the groups.
std::optional<FitResult> exact_group_split(const Eigen::MatrixXd& j) {
  const int n = static_cast<int>(j.rows());
  const double max_abs = j.cwiseAbs().maxCoeff();
  if (max_abs <= 0.0) return std::nullopt;
  const double eps = 1e-9 * max_abs;

  double c = 0.0;
  for (int l = 0; l < n && c == 0.0; ++l)
    for (int k = l + 1; k < n; ++k)
      if (std::abs(j(l, k)) > eps) {
        c = j(l, k);
        break;
      }
  if (c <= eps) return std::nullopt;

  // Group labels by union over nonzero entries.
  std::vector<int> label(n, -1);
  int groups = 0;
  for (int seed = 0; seed < n; ++seed) {
    if (label[seed] != -1) continue;
    if (groups == 2) return std::nullopt;
    label[seed] = groups;
    std::vector<int> stack{seed};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int k = 0; k < n; ++k)
        if (k != v && std::abs(j(v, k)) > eps && label[k] == -1) {
          label[k] = groups;
          stack.push_back(k);
        }
    }
    ++groups;
  }
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k) {
      const double want = label[l] == label[k] ? c : 0.0;
      if (std::abs(j(l, k) - want) > eps) return std::nullopt;
    }

  const double amp = std::sqrt(c) / 2.0;
  std::vector<int> signs(n);
  for (int l = 0; l < n; ++l) signs[l] = label[l] == 0 ? 1 : -1;
  return make_fit(Eigen::VectorXd::Constant(n, amp), Eigen::VectorXd::Constant(n, amp),
                  signs, j);
}

// One Gauss-Seidel sweep of the clamped least-squares update for the factor
// u in the pair model sum 2 u_l u_k against residual target r.
void nnls_sweep(const Eigen::MatrixXd& r, Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  for (int i = 0; i < n; ++i) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      num += r(i, k) * u[k];
      den += u[k] * u[k];
    }
    u[i] = den > 1e-300 ? std::max(0.0, num / (2.0 * den)) : 0.0;
  }
}

FitResult nnls_fit(const Eigen::MatrixXd& j, const std::vector<int>& signs,
                   const Eigen::VectorXd& xi0, const Eigen::VectorXd& eta0,
                   const FitOptions& opt) {
  const int n = static_cast<int>(j.rows());
  Eigen::VectorXd xi = xi0, eta = eta0;
  Eigen::VectorXd s(n);
  for (int l = 0; l < n; ++l) s[l] = signs[l];

  Eigen::MatrixXd r(n, n);
  double prev = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    // Fit xi against what the eta term leaves over, then the reverse, with
    // the residual expressed in the sign-free frame for the eta step.
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        r(l, k) = j(l, k) - 2.0 * s[l] * s[k] * eta[l] * eta[k];
    nnls_sweep(r, xi);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) r(l, k) = s[l] * s[k] * (j(l, k) - 2.0 * xi[l] * xi[k]);
    nnls_sweep(r, eta);

    double res = 0.0;
    for (int l = 0; l < n; ++l)
      for (int k = l + 1; k < n; ++k) {
        const double fit = 2.0 * xi[l] * xi[k] + 2.0 * s[l] * s[k] * eta[l] * eta[k];
        res += (j(l, k) - fit) * (j(l, k) - fit);
      }
    // Keep sweeping while the squared residual still shrinks at a useful
    // relative rate; representable targets then run down to rounding noise
    // instead of stalling at the first small absolute step.
    if (res == 0.0 || prev - res < opt.tolerance * prev) break;
    prev = res;
  }
  return make_fit(std::move(xi), std::move(eta), signs, j);
}

}  // namespace

Eigen::MatrixXd effective_coupling(const IntensityProfile& intensities,
                                   const RelationMatrix& a) {
  const Eigen::VectorXcd c = combined_amplitudes(intensities, a);
  const int n = static_cast<int>(c.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k) {
      const double v = 2.0 * std::real(c[l] * std::conj(c[k]));
      j(l, k) = v;
      j(k, l) = v;
    }
  return j;
}

Eigen::VectorXd effective_field(const IntensityProfile& intensities, const RelationMatrix& a) {
  const Eigen::VectorXcd c = combined_amplitudes(intensities, a);
  const int n = static_cast<int>(c.size());
  if (!intensities.has_fixed_section()) return Eigen::VectorXd::Zero(n);
  double f = 0.0;
  for (int m = 0; m < intensities.fixed_blocks(); ++m)
    f -= intensities.sigma[m] * static_cast<double>(intensities.z[m]);
  Eigen::VectorXd h(n);
  for (int l = 0; l < n; ++l) h[l] = 2.0 * f * std::real(c[l]);
  return h;
}

IsingProblem effective_problem(const IntensityProfile& intensities, const RelationMatrix& a) {
  return IsingProblem(effective_coupling(intensities, a),
                      effective_field(intensities, a));
}

FitResult fit_intensities(const Eigen::MatrixXd& j_target, const FitOptions& options) {
  check_target(j_target);
  const int n = static_cast<int>(j_target.rows());
  Eigen::MatrixXd j = (j_target + j_target.transpose()) / 2.0;
  j.diagonal().setZero();

  if (auto exact = exact_group_split(j)) return *exact;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("fit_intensities: eigendecomposition failed");
  const Eigen::VectorXd& vals = es.eigenvalues();  // ascending order
  const Eigen::VectorXd v1 = es.eigenvectors().col(n - 1);
  const Eigen::VectorXd v2 = es.eigenvectors().col(n - 2);

  const double scale = std::max(std::sqrt(j.cwiseAbs().mean()), 1e-6);
  const double floor_amp = 1e-3 * scale;
  Eigen::VectorXd eta0 =
      (std::sqrt(std::max(vals[n - 1], 0.0) / 2.0) * v1.cwiseAbs()).array() + floor_amp;
  Eigen::VectorXd xi0 =
      (std::sqrt(std::max(vals[n - 2], 0.0) / 2.0) * v2.cwiseAbs()).array() + floor_amp;

  std::vector<int> signs(n), ones(n, 1);
  for (int l = 0; l < n; ++l) signs[l] = v1[l] >= 0.0 ? 1 : -1;

  FitResult best = nnls_fit(j, signs, xi0, eta0, options);
  if (signs != ones) {
    FitResult uniform = nnls_fit(j, ones, xi0, eta0, options);
    if (uniform.residual < best.residual) best = std::move(uniform);
  }
  return best;
}

std::pair<IntensityProfile, RelationMatrix> negative_ratio_construction(int n, int r,
                                                                        double xi_amp,
                                                                        double eta_amp) {
  if (n < 2) throw std::invalid_argument("negative_ratio_construction: need n >= 2");
  if (r < 0 || r > n)
    throw std::invalid_argument("negative_ratio_construction: r out of range");
  if (xi_amp < 0 || eta_amp < 0)
    throw std::invalid_argument("negative_ratio_construction: negative amplitude");
  std::vector<int> signs(n, 1);
  for (int l = 0; l < r; ++l) signs[l] = -1;
  return {IntensityProfile::uniform(n, xi_amp, eta_amp), RelationMatrix::quadrature(signs)};
}

long negative_interaction_count(const Eigen::MatrixXd& j) {
  if (j.rows() != j.cols())
    throw std::invalid_argument("negative_interaction_count: matrix must be square");
  const double tol = 1e-9 * std::max(1.0, j.cwiseAbs().maxCoeff());
  long count = 0;
  for (int l = 0; l < j.rows(); ++l)
    for (int k = l + 1; k < j.cols(); ++k)
      if (j(l, k) < -tol) ++count;
  return count;
}

IntensityProfile zero_interaction(const IntensityProfile& intensities, const RelationMatrix& a,
                                  int r, int k) {
  const int n = intensities.spins();
  if (a.size() != n) throw std::invalid_argument("zero_interaction: size mismatch");
  if (r < 0 || k < 0 || r >= n || k >= n || r == k)
    throw std::invalid_argument("zero_interaction: bad pair");
  const std::complex<double> ar = a.entry(r), ak = a.entry(k);
  const bool quadrature = std::real(ar) == 0.0 && std::real(ak) == 0.0 &&
                          std::abs(std::imag(ar)) == 1.0 && std::abs(std::imag(ak)) == 1.0;
  if (!quadrature)
    throw std::invalid_argument("zero_interaction: relation matrix must be quadrature");
  if (std::imag(ar) == std::imag(ak))
    throw std::invalid_argument(
        "zero_interaction: same-sign pair cannot be zeroed by amplitudes");

  // Opposite signs: J_rk = 2 xi_r xi_k - 2 eta_r eta_k, solve for one eta.
  IntensityProfile out = intensities;
  const double want = intensities.xi[r] * intensities.xi[k];
  if (intensities.eta[k] > 0.0) {
    out.eta[r] = want / intensities.eta[k];
  } else if (intensities.eta[r] > 0.0) {
    out.eta[k] = want / intensities.eta[r];
  } else if (want != 0.0) {
    throw std::invalid_argument("zero_interaction: pair has no eta amplitude to adjust");
  }
  return out;
}

}  // namespace qsim
