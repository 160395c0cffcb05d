// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qroot/basis.hpp"
#include "qroot/common.hpp"
#include "qroot/rng.hpp"

namespace qroot {

struct SampleMeta {
  std::uint64_t seed = 0;
  std::optional<Vec> true_state;
};

/// Tagged measurement records from mutually complementing experiments:
/// n coordinate values x_k and m momentum values p_l.
struct SampleSet {
  RealVec coord;
  RealVec mom;
  SampleMeta meta;

  int n() const { return static_cast<int>(coord.size()); }
  int m() const { return static_cast<int>(mom.size()); }
  int total() const { return n() + m(); }
};

/// Projection counts along measurement directions. Column q of `counts`
/// holds the outcomes with projection m = j - q (ordered j, j-1, ..., -j).
struct SpinCounts {
  std::vector<std::pair<double, double>> directions;  // (theta, phi)
  Eigen::MatrixXi counts;

  double j() const { return (counts.cols() - 1) / 2.0; }
  long total() const { return counts.sum(); }
  // spin-1/2 accessors
  Eigen::VectorXi plus() const { return counts.col(0); }
  Eigen::VectorXi minus() const { return counts.col(1); }
};

/// n i.i.d. draws from |psi(x)|^2 followed by m draws from |psi~(p)|^2,
/// via inverse-CDF on the basis grid with linear interpolation between
/// nodes. One generator stream; deterministic given the seed.
SampleSet sample_complementary(const StateVector& state, int n, int m,
                               std::uint64_t seed);

/// Multinomial projection counts for each direction; spinor ordered
/// m = j ... -j. For j = 1/2 the outcome probabilities are the closed-form
/// cos/sin expressions; for general j they come from the rotated amplitudes.
SpinCounts sample_spin(const Vec& spinor,
                       const std::vector<std::pair<double, double>>& directions,
                       int shots_per_direction, std::uint64_t seed);

/// Multinomial counts over `probabilities` summing to n.
Eigen::VectorXi sample_register(const RealVec& probabilities, int n,
                                std::uint64_t seed);

/// Directions uniform on the sphere: cos(theta) ~ U[-1,1], phi ~ U[0,2pi).
std::vector<std::pair<double, double>> random_directions(int count, Rng& rng);

/// Inverse-CDF draws from a tabulated density (trapezoid cumulative,
/// linear interpolation inside cells).
RealVec sample_from_density(const RealVec& grid, const RealVec& density, int n,
                            Rng& rng);

}  // namespace qroot
