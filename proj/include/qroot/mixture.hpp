// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "qroot/basis.hpp"
#include "qroot/common.hpp"
#include "qroot/fixed_point.hpp"
#include "qroot/sampler.hpp"

namespace qroot {

struct MixtureModel {
  std::vector<StateVector> components;
  RealVec weights;
  /// Component index of each sample point; coordinate points first, then
  /// momentum points.
  std::vector<int> assignment;
  /// Per-round (weights, component log-likelihood).
  std::vector<std::pair<RealVec, double>> history;
  int rounds = 0;
  bool converged = true;
  std::string warning;
};

struct MixtureConfig {
  std::uint64_t seed = 0;
  int max_rounds = 200;
  /// false reuses the round-1 random vector every round, so the assignment
  /// reaches an exactly repeating configuration (detected by cycle hashing).
  bool fresh_randomness = true;
  SolverConfig solver;
  double weight_tol = 1e-4;
  double fidelity_tol = 1e-6;
};

/// Quasi-Bayesian mixture division: randomized posterior assignment of each
/// point, weight re-estimation f_i = n_i/n, and per-component root MLE,
/// repeated to equilibrium. Starved components are reseeded from the 10%
/// worst-explained points.
MixtureModel quasi_bayes_divide(const SampleSet& samples, int k,
                                std::shared_ptr<const BasisSet> basis,
                                const MixtureConfig& config = {});

/// Boltzmann H functionals of a mixture (natural logarithm, 0 ln 0 = 0):
/// h0 = integral p ln p, h_mix = sum f_i integral p_i ln p_i,
/// i_mix = h_mix - h0, s_sh = -sum f_i ln f_i.
struct InfoReport {
  double h0 = 0.0;
  double h_mix = 0.0;
  double i_mix = 0.0;
  double s_sh = 0.0;
};

InfoReport info_report(const MixtureModel& model, const BasisSet& basis);

/// Hermitian, unit-trace, PSD density matrix from weighted pure components.
struct DensityMatrixM {
  Mat rho;
  std::vector<Vec> components;
  RealVec weights;
};

DensityMatrixM assemble_density(const std::vector<Vec>& components,
                                const RealVec& weights);

/// Tr((rho_hat - rho_true)^2).
double density_deviation(const Mat& rho_hat, const Mat& rho_true);

/// L = a0 E + a1 s1 + a2 s2 + a3 s3 with a0 = Tr(L)/2, a_i = Tr(s_i L)/2;
/// b1 = a0+a3, b2 = a1+i a2, b3 = a1-i a2, b4 = a0-a3.
struct PauliCoefficients {
  cxd a0, a1, a2, a3;
  cxd b1, b2, b3, b4;
};

PauliCoefficients pauli_decompose(const Eigen::Matrix2cd& l);
Eigen::Matrix2cd pauli_reconstruct(const PauliCoefficients& p);

/// Row-psi densities psi(x) = (phi_0(x), phi_1(x)) L: coordinate and momentum
/// densities psi psi^+ at the given points; both integrate to Tr(L L^+).
std::pair<RealVec, RealVec> psi_row_density(const Eigen::Matrix2cd& l,
                                            const BasisSet& basis,
                                            const RealVec& points);

}  // namespace qroot
