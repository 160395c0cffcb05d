// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/fixed_point.hpp"

#include <cmath>

namespace qroot {

FixedPointOutcome damped_fixed_point(
    const Vec& c0, const std::function<Vec(const Vec&)>& map,
    const std::function<double(const Vec&)>& loglik, const SolverConfig& cfg,
    double residual_scale) {
  Vec c = c0 / c0.norm();
  double ll = loglik(c);
  double gamma = cfg.gamma;
  const double cert = 10.0 * cfg.tol / residual_scale;

  FixedPointOutcome out;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Vec f = map(c);
    const double residual = (f - c).norm();

    Vec cand = (1.0 - gamma) * c + gamma * f;
    cand /= cand.norm();
    double ll_cand = loglik(cand);
    while (ll_cand < ll - cfg.loglik_slack && gamma > cfg.gamma_floor) {
      gamma *= 0.5;
      cand = (1.0 - gamma) * c + gamma * f;
      cand /= cand.norm();
      ll_cand = loglik(cand);
    }
    if (ll_cand < ll - cfg.loglik_slack) {
      // Stalled at the damping floor; report the current iterate.
      out.c = c;
      out.iterations = it;
      out.residual = residual;
      out.loglik = ll;
      out.converged = residual < cert;
      if (!out.converged)
        throw convergence_error("fixed point stalled at damping floor", out);
      return out;
    }

    const double delta = (cand - c).norm();
    c = cand;
    ll = ll_cand;
    if (delta < cfg.tol && residual < cert) {
      out.c = c;
      out.iterations = it;
      out.residual = (map(c) - c).norm();
      out.loglik = ll;
      out.converged = true;
      return out;
    }
  }
  out.c = c;
  out.iterations = cfg.max_iter;
  out.residual = (map(c) - c).norm();
  out.loglik = ll;
  out.converged = false;
  throw convergence_error("fixed point did not converge in max_iter", out);
}

}  // namespace qroot
