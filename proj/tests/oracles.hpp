// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used to freeze expected values.
// Everything here deliberately avoids the library's evaluation paths:
// Hermite functions come from std::hermite with explicit normalization,
// quadrature is Simpson instead of trapezoid.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// phi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)) via std::hermite.
/// Factorials overflow around n ~ 150; fine for oracle use (n <= 30).
inline double hermite_function(int n, double x) {
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  const double norm =
      std::sqrt(std::pow(2.0, n) * fact * std::sqrt(M_PI));
  return std::hermite(static_cast<unsigned>(n), x) * std::exp(-0.5 * x * x) /
         norm;
}

/// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int panels = 2000) {
  if (panels % 2 != 0) ++panels;
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i)
    acc += f(a + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

/// Best global phase alignment by brute-force scan; returns the minimum of
/// ||e^{i beta} a - b|| over the scanned phases.
inline double best_phase_distance(const Eigen::VectorXcd& a,
                                  const Eigen::VectorXcd& b, int steps = 100) {
  double best = 1e300;
  for (int i = 0; i < steps; ++i) {
    const double beta = 2.0 * M_PI * i / steps;
    const std::complex<double> ph(std::cos(beta), std::sin(beta));
    best = std::min(best, (ph * a - b).norm());
  }
  return best;
}

/// Spin-1/2 state from exact outcome frequencies along x, y, z: Bloch vector
/// a_k = f_+(k) - f_-(k), normalized, then the standard spinor
/// (cos(T/2), e^{i Phi} sin(T/2)).
inline Eigen::Vector2cd bloch_inversion(double fplus_x, double fplus_y,
                                        double fplus_z) {
  const double ax = 2.0 * fplus_x - 1.0;
  const double ay = 2.0 * fplus_y - 1.0;
  const double az = 2.0 * fplus_z - 1.0;
  const double r = std::sqrt(ax * ax + ay * ay + az * az);
  if (r == 0.0) throw std::runtime_error("bloch_inversion: zero Bloch vector");
  const double theta = std::acos(az / r);
  const double phi = std::atan2(ay, ax);
  Eigen::Vector2cd c;
  c[0] = std::cos(theta / 2.0);
  c[1] = std::exp(std::complex<double>(0.0, phi)) * std::sin(theta / 2.0);
  return c;
}

}  // namespace oracle
