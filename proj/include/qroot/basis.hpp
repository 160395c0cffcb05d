// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <utility>

#include <json.hpp>

#include "qroot/common.hpp"

namespace qroot {

enum class BasisKind { oscillator, histogram };

/// Real function sampled on a strictly increasing grid.
struct GridFunction {
  RealVec points;
  RealVec values;
};

/// Normalized Hermite functions phi_0..phi_{s-1} at a point, evaluated by the
/// three-term recurrence (no factorials, stable up to large n).
RealVec hermite_functions(int s, double x);

/// Orthonormal basis with coordinate- and momentum-space samples on a grid.
///
/// Oscillator kind: phi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)) with
/// energies n + 1/2 (units hbar = m = omega = 1); the momentum functions are
/// the analytic Fourier images (-i)^n phi_n(p) on the same grid.
/// Histogram kind: s indicator bins of width dx, grid = bin centers; momentum
/// samples obtained from the unitary DFT path on the conjugate grid.
class BasisSet {
 public:
  static BasisSet oscillator(int s, double grid_halfwidth, int grid_points);
  /// Oscillator basis on the default grid for this s (see default_halfwidth).
  static BasisSet oscillator(int s);
  static BasisSet histogram(int s, double lo, double hi);

  /// Half-width that keeps |phi_{s-1}| < 1e-8 at the boundary:
  /// max(8, sqrt(2s-1) + 5).
  static double default_halfwidth(int s);
  static constexpr int kDefaultGridPoints = 1024;

  int size() const { return s_; }
  BasisKind kind() const { return kind_; }
  double grid_halfwidth() const { return halfwidth_; }
  int grid_points() const { return static_cast<int>(grid_.size()); }

  const RealVec& grid() const { return grid_; }
  const RealVec& momentum_grid() const { return mom_grid_; }
  const RealVec& quad_weights() const { return weights_; }
  const RealVec& momentum_quad_weights() const { return mom_weights_; }
  const RealVec& energies() const { return energies_; }
  const Mat& coord_values() const { return coord_values_; }  // [grid x s]
  const Mat& mom_values() const { return mom_values_; }      // [mom_grid x s]

  /// phi_i at an arbitrary point inside the grid coverage.
  Vec eval_coord(double x) const;
  Vec eval_mom(double p) const;
  /// Row k holds phi_i(points[k]).
  Mat eval_coord(const RealVec& points) const;
  Mat eval_mom(const RealVec& points) const;

  nlohmann::json descriptor() const;
  static BasisSet from_descriptor(const nlohmann::json& j);

 private:
  BasisSet() = default;

  int s_ = 0;
  BasisKind kind_ = BasisKind::oscillator;
  double halfwidth_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;  // histogram support
  RealVec grid_, mom_grid_, weights_, mom_weights_, energies_;
  Mat coord_values_, mom_values_;
};

/// Normalized state over a shared immutable basis.
struct StateVector {
  std::shared_ptr<const BasisSet> basis;
  Vec c;

  int size() const { return static_cast<int>(c.size()); }
  /// Validates dimension and norm (within 1e-6), then renormalizes exactly.
  static StateVector make(std::shared_ptr<const BasisSet> basis, Vec c);
};

enum class Space { coordinate, momentum };

/// psi(x) = sum_i c_i phi_i(x) (or the momentum image) at the given points.
Vec evaluate_psi(const StateVector& state, Space space, const RealVec& points);

/// |psi|^2 sampled on the basis grid of the chosen space.
RealVec density_on_grid(const StateVector& state, Space space);

/// Mean square momentum computed two ways: lhs = integral |dpsi/dx|^2 dx via
/// finite differences on the grid, rhs = integral p^2 |psi~(p)|^2 dp by
/// quadrature.
std::pair<double, double> verify_parseval(const StateVector& state);

/// Unitary DFT, X_k = (1/sqrt(N)) sum_j x_j e^{-2 pi i j k / N}.
Vec discrete_fourier(const Vec& v);
Vec inverse_discrete_fourier(const Vec& v);
Mat discrete_fourier_matrix(int n);

struct ConjugatePair {
  RealVec pgrid;
  Vec values;
};

/// Continuous Fourier transform psi~(p) = (2 pi)^{-1/2} integral psi(x)
/// e^{-ipx} dx discretized on a uniform grid. Returns samples on the
/// conjugate grid p_k = (k - N/2) * 2 pi / (N dx); the phase alignment uses
/// x_j = x_0 + j dx so that the unitary DFT of (-1)^j psi_j reproduces the
/// continuous transform up to the e^{-i p_k x_0} factor.
ConjugatePair fourier_continuous(const RealVec& xgrid, const Vec& psi);
Vec inverse_fourier_continuous(const RealVec& xgrid, const RealVec& pgrid,
                               const Vec& psit);

/// Uniform conjugate grid of a uniform coordinate grid.
RealVec conjugate_grid(const RealVec& xgrid);

/// Histogram density estimate: counts / (n * bin width) at bin centers.
GridFunction histogram_density(const RealVec& samples, double lo, double hi,
                               int bins);

}  // namespace qroot
