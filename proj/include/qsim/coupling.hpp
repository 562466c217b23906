#pragma once

#include <utility>

#include "qsim/lattice.hpp"
#include "qsim/optics.hpp"

namespace qsim {

/// Coupling matrix realized by an intensity profile under relation matrix A:
/// J_lk = 2 Re{c_l conj(c_k)} with c_l = xi_l + a_l eta_l, zero diagonal.
Eigen::MatrixXd effective_coupling(const IntensityProfile& intensities,
                                   const RelationMatrix& a);

/// Local fields produced by the fixed section: h_l = 2 F Re{c_l} with
/// F = -sum_m sigma_m z_m. Zero vector when the profile has no fixed blocks.
Eigen::VectorXd effective_field(const IntensityProfile& intensities, const RelationMatrix& a);

/// Bundles the two maps above into an Ising instance with zero offset, so
/// that center intensity and energy satisfy I(x) = const - H(x).
IsingProblem effective_problem(const IntensityProfile& intensities, const RelationMatrix& a);

/// Machine realization of a target coupling matrix within the quadrature
/// family: sign pattern from the leading eigenvector, then alternating
/// non-negative least squares on xi and eta. residual is the Frobenius norm
/// of the off-diagonal mismatch; it is reported even when large, callers
/// decide whether the approximation is acceptable.
/// The alternation stops once the squared residual improves by less than
/// tolerance relative per sweep, or at the iteration cap.
struct FitOptions {
  int max_iterations = 500;
  double tolerance = 1e-6;
};

struct FitResult {
  IntensityProfile intensities;
  RelationMatrix relation;
  Eigen::MatrixXd achieved;
  double residual = 0.0;
};

FitResult fit_intensities(const Eigen::MatrixXd& j_target, const FitOptions& options = {});

/// Benchmark family: quadrature signs with r entries at -i and n-r at +i,
/// uniform amplitudes. With eta > xi this yields r*(n-r) negative couplings
/// of value 2 xi^2 - 2 eta^2 and positive couplings 2 xi^2 + 2 eta^2.
std::pair<IntensityProfile, RelationMatrix> negative_ratio_construction(
    int n, int r, double xi_amp = 1.0, double eta_amp = 2.0);

/// Number of strictly negative couplings J_lk over l < k, with a small
/// relative threshold to ignore fit noise around zero.
long negative_interaction_count(const Eigen::MatrixXd& j);

/// Returns a copy of the profile with eta rescaled on one spin of the pair
/// (r, k) so that J_rk becomes exactly zero. Requires opposite quadrature
/// signs on the pair; same-sign couplings cannot be switched off by
/// amplitude choice alone. Other couplings of the adjusted spin move too,
/// mirroring what happens on the physical machine.
IntensityProfile zero_interaction(const IntensityProfile& intensities, const RelationMatrix& a,
                                  int r, int k);

}  // namespace qsim
