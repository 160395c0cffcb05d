// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "qroot/common.hpp"

namespace qroot {

/// Shared configuration for the damped likelihood-equation iterations.
struct SolverConfig {
  double tol = 1e-9;
  int max_iter = 10000;
  double gamma = 0.5;
  double gamma_floor = 0.01;
  double loglik_slack = 1e-9;
  std::optional<Vec> init;
  /// After converging, also try the complex-conjugate iterate and keep the
  /// higher-likelihood solution. The conjugate state reproduces the
  /// coordinate density exactly and the momentum density up to reflection,
  /// so it is the natural competitor mode of these likelihoods.
  bool refine_conjugate = true;
};

struct FixedPointOutcome {
  Vec c;
  int iterations = 0;
  double residual = 0.0;  // ||F(c) - c|| at the returned iterate
  double loglik = 0.0;
  bool converged = false;
};

/// Thrown when the iteration exhausts max_iter; carries the best iterate.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& msg, FixedPointOutcome best)
      : std::runtime_error(msg), best_(std::move(best)) {}
  const FixedPointOutcome& best() const { return best_; }

 private:
  FixedPointOutcome best_;
};

/// Damped, renormalized fixed-point iteration c <- (1-gamma) c + gamma F(c)
/// with a monotone log-likelihood guard (gamma halves on a decrease beyond
/// the slack, floor gamma_floor). Stops when ||delta c|| < tol and the
/// certificate residual_scale * ||F(c) - c|| < 10 * tol.
FixedPointOutcome damped_fixed_point(
    const Vec& c0, const std::function<Vec(const Vec&)>& map,
    const std::function<double(const Vec&)>& loglik, const SolverConfig& cfg,
    double residual_scale = 1.0);

}  // namespace qroot
