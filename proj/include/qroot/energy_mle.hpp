// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "qroot/basis.hpp"
#include "qroot/common.hpp"
#include "qroot/fixed_point.hpp"
#include "qroot/root_mle.hpp"
#include "qroot/sampler.hpp"

namespace qroot {

/// Maximum-likelihood estimate under norm and mean-energy constraints.
/// lambda1 + lambda2 * e_bar = n + m (the multiplier identity).
struct ConstrainedEstimate {
  StateVector state;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double e_bar = 0.0;
  Mat covariance;  // constrained covariance, s x s
  int basis_size_used = 0;
  int iterations = 0;
  double residual = 0.0;
  double loglik = 0.0;
  bool converged = true;
  std::string warning;
};

/// Global phase alpha and time translation t0 removed when comparing against
/// a reference under the energy constraint.
struct TimeGauge {
  double alpha = 0.0;
  double t0 = 0.0;
};

/// Sample mean energy: mean U(x_k) + mean p_l^2/2 (m = 1).
double estimate_mean_energy(const SampleSet& samples,
                            const std::function<double(double)>& potential);

struct ConstrainedConfig {
  SolverConfig inner;
  /// Energy tolerance, relative to max(|e_bar|, 1).
  double tol_e_rel = 1e-6;
  int max_outer = 200;
  /// Force lambda2 (skips the outer root-finding); lambda2 = 0 reproduces the
  /// unconstrained estimator.
  std::optional<double> lambda2_fixed;
};

/// Solves R c = (lambda1 + lambda2 E_i) c with <E>(c) = e_bar: scalar
/// root-finding (bracket + bisection) on lambda2 around the damped inner
/// fixed point; lambda1 is recovered from the multiplier identity.
ConstrainedEstimate solve_constrained(const SampleSet& samples,
                                      std::shared_ptr<const BasisSet> basis,
                                      double e_bar,
                                      const ConstrainedConfig& config = {});

/// Applies c_j -> e^{i(alpha + t0 E_j)} c_j with (alpha, t0) minimizing
/// ||transformed - reference||^2. The optimum solves the 2x2 linear system in
/// (alpha, t0) built from the norm and energy pairings; the system is
/// iterated (Newton) so finite transformations are removed exactly. Falls
/// back to the plain gauge fix when the reference energy variance vanishes.
std::pair<StateVector, TimeGauge> time_gauge_fix(const StateVector& estimate,
                                                 const StateVector& reference,
                                                 const RealVec& energies);

/// Constrained covariance (both the closed form and the factor-loadings
/// route, asserted to agree):
/// Sigma_ij = (delta_ij - c_i c_j* (1 + (E_i - Ebar)(E_j - Ebar)/var_E))/(n+m).
Mat constrained_covariance(const Vec& c, const RealVec& energies, long n_plus_m);

/// Optimal harmonic count round((r f (n+m))^{1/(r+1)}) for the tail law
/// Q(s) = f / s^r, clamped to >= 1.
int optimal_basis_size(double r, double f, long n_plus_m);

}  // namespace qroot
