// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "qroot/common.hpp"
#include "qroot/fixed_point.hpp"
#include "qroot/sampler.hpp"
#include "qroot/stats.hpp"

namespace qroot {

/// Spin-j amplitude vector, components ordered m = j, j-1, ..., -j.
struct Spinor {
  double j = 0.5;
  Vec c;

  static Spinor make(double j, Vec c);
};

struct SpinEstimate {
  Spinor state;
  int iterations = 0;
  double residual = 0.0;
  double loglik = 0.0;
  bool converged = true;
  std::string warning;
};

/// Closed-form outcome probabilities P+-(theta, phi) for a spin-1/2 state
/// (c[0] = amplitude along +z). P+ + P- = 1 exactly.
std::pair<double, double> spin_half_probs(const Vec& c, double theta, double phi);

/// Wigner rotation matrix D^j_{m'm}(alpha, beta, gamma) in the zyz
/// convention, D = e^{-i m' alpha} d^j_{m'm}(beta) e^{-i m gamma}, rows and
/// columns ordered m = j..-j. The little-d uses the explicit factorial sum.
Mat wigner_d(double j, double alpha, double beta, double gamma);

/// Amplitudes in the frame whose z axis points along (theta, phi):
/// psi~ = D(phi, theta, 0)^dagger psi, so |psi~_m|^2 is the probability of
/// projection m along that direction. For j = 1/2 this reproduces
/// spin_half_probs exactly, which pins the convention.
Vec rotated_spinor(const Vec& c, double j, double theta, double phi);

/// Spin-1/2 MLE from +/- counts along >= 3 noncoplanar directions.
SpinEstimate solve_spin_half(const SpinCounts& counts,
                             const SolverConfig& config = {});

/// General-spin MLE through the D-matrix likelihood equation.
SpinEstimate solve_spin_general(const SpinCounts& counts, double j,
                                const SolverConfig& config = {});

struct SpinHomogeneity {
  bool reject = false;
  ChiSqReport report;
  double quantile = 0.0;
  double alpha = 0.05;
};

/// Incoherence test: reject when N1 N2/(N1+N2) (1 - |<c1,c2>|^2) exceeds the
/// upper-alpha quantile of chi^2_{4j}/2.
SpinHomogeneity spin_homogeneity(const Spinor& c1, long n1, const Spinor& c2,
                                 long n2, double alpha_level);

}  // namespace qroot
