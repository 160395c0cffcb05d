// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "qroot/basis.hpp"
#include "qroot/common.hpp"
#include "qroot/fixed_point.hpp"
#include "qroot/sampler.hpp"
#include "qroot/stats.hpp"

namespace qroot {

/// Data-dependent Hermitian matrix of the likelihood equation R c = (n+m) c.
struct RMatrix {
  Mat entries;
  int n = 0;
  int m = 0;
};

struct EstimateResult {
  StateVector state;
  int iterations = 0;
  /// ||R c - (n+m) c|| / (n+m) at the returned state.
  double residual = 0.0;
  Mat fisher;      // (s-1)x(s-1), pivot component removed
  Mat covariance;  // s x s, (I - c c^dagger)/(n+m)
  double loglik = 0.0;
  bool converged = true;
  std::string warning;
};

/// Estimate of a bare coefficient vector (quantum register, spinor).
struct VectorEstimate {
  Vec c;
  int iterations = 0;
  double residual = 0.0;
  Mat fisher;
  Mat covariance;
  double loglik = 0.0;
  bool converged = true;
  std::string warning;
};

/// R_ij = sum_k phi_i*(x_k) phi_j(x_k) / P(x_k) + momentum analog, with the
/// densities evaluated at `state` and clamped below by 1e-12 * max density.
RMatrix build_R(const SampleSet& samples, const BasisSet& basis,
                const StateVector& state);

/// Log-likelihood sum_k ln P(x_k) + sum_l ln P~(p_l) at `state`.
double loglik_samples(const SampleSet& samples, const StateVector& state);

/// Default solver initialization: leading eigenvector of R evaluated at the
/// maximally mixed reference density.
Vec mle_spectral_init(const SampleSet& samples, const BasisSet& basis);

/// Maximum-likelihood state from complementary coordinate/momentum data by
/// the damped fixed-point iteration of the likelihood equation.
EstimateResult solve_mle(const SampleSet& samples,
                         std::shared_ptr<const BasisSet> basis,
                         const SolverConfig& config = {});

/// Removes the global phase: returns e^{i alpha} * estimate with alpha chosen
/// so that <reference, result> is real nonnegative (minimizes ||delta c||).
StateVector gauge_fix(const StateVector& estimate, const StateVector& reference);
Vec gauge_fix(const Vec& estimate, const Vec& reference);

/// Fisher matrix (s-1 x s-1, pivot = largest-modulus component removed) and
/// the total covariance (I - c c^dagger)/(n+m), the (E - rho)/(n+m) form.
std::pair<Mat, Mat> fisher_and_covariance(const Vec& c, long n_plus_m);

/// statistic = N (1 - |<estimate, truth>|^2), the half chi-square form with
/// 2(s-1) doubled degrees of freedom.
ChiSqReport chisq_fidelity(const StateVector& estimate, const StateVector& truth,
                           long N);
ChiSqReport chisq_fidelity(const Vec& estimate, const Vec& truth, long N);

/// statistic = N1 N2/(N1+N2) (1 - |<c1, c2>|^2); the trace form over the two
/// pure density matrices is computed as a cross-check and must agree.
ChiSqReport homogeneity_test(const StateVector& c1, long n1,
                             const StateVector& c2, long n2);
ChiSqReport homogeneity_test(const Vec& c1, long n1, const Vec& c2, long n2);

/// Quantum-register MLE: counts n_i in the computational basis and m_j after
/// the unitary U (c~ = U c), iterating
/// c_i <- (1/(n+m)) [ n_i / c_i* + sum_j m_j U_ji* / c~_j* ].
VectorEstimate register_mle(const Eigen::VectorXi& counts_coord,
                            const Eigen::VectorXi& counts_conj, const Mat& U,
                            const SolverConfig& config = {});

struct PhaseRetrievalResult {
  RealVec grid;
  Vec psi;
  std::vector<double> error_trace;  // momentum-side modulus mismatch per pass
  int iterations = 0;
};

/// Iterative phase adjustment between coordinate and momentum densities:
/// start from sqrt(hist_x) with zero phase, alternate the continuous-FT pair
/// while re-imposing the measured moduli in each space. hist_p must live on
/// the conjugate grid of hist_x.
PhaseRetrievalResult phase_retrieval(const GridFunction& hist_x,
                                     const GridFunction& hist_p, int max_iter);

}  // namespace qroot
