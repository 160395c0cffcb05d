// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qroot {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Malformed or insufficient input data (degenerate samples, bad files,
/// dimension mismatches).
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid fails a decay or coverage precondition.
class grid_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constraint cannot be met for the given inputs.
class infeasible_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double sqr(double x) { return x * x; }

}  // namespace qroot
