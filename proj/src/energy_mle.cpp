// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/energy_mle.hpp"

#include <algorithm>
#include <cmath>

namespace qroot {

namespace {

double mean_energy_of(const Vec& c, const RealVec& energies) {
  double e = 0.0;
  for (int i = 0; i < c.size(); ++i) e += energies[i] * std::norm(c[i]);
  return e;
}

double energy_variance_of(const Vec& c, const RealVec& energies) {
  const double e1 = mean_energy_of(c, energies);
  double e2 = 0.0;
  for (int i = 0; i < c.size(); ++i) e2 += sqr(energies[i]) * std::norm(c[i]);
  return e2 - sqr(e1);
}

}  // namespace

double estimate_mean_energy(const SampleSet& samples,
                            const std::function<double(double)>& potential) {
  if (samples.n() < 1 || samples.m() < 1)
    throw data_error(
        "estimate_mean_energy: needs both coordinate and momentum samples");
  double u = 0.0;
  for (int k = 0; k < samples.n(); ++k) u += potential(samples.coord[k]);
  u /= samples.n();
  double t = 0.0;
  for (int l = 0; l < samples.m(); ++l) t += sqr(samples.mom[l]) / 2.0;
  t /= samples.m();
  return u + t;
}

ConstrainedEstimate solve_constrained(const SampleSet& samples,
                                      std::shared_ptr<const BasisSet> basis,
                                      double e_bar,
                                      const ConstrainedConfig& config) {
  if (samples.total() < 1) throw data_error("solve_constrained: empty sample set");
  const int s = basis->size();
  const RealVec& energies = basis->energies();
  const double total = static_cast<double>(samples.total());
  const double tol_e = config.tol_e_rel * std::max(std::abs(e_bar), 1.0);

  if (e_bar < energies.minCoeff() - 1e-12 || e_bar > energies.maxCoeff() + 1e-12)
    throw infeasible_error(
        "solve_constrained: e_bar outside the truncated basis energy range");

  // Inner problem at fixed lambda2: damped fixed point of
  //   c_i <- (R c)_i / (lambda1 + lambda2 E_i),  lambda1 = n+m - lambda2 <E>(c),
  // guarded by the penalized merit ln L - lambda2 (<E>(c) - e_bar).
  const Mat A = basis->eval_coord(samples.coord);
  const Mat B = basis->eval_mom(samples.mom);

  const auto clamp_floor = [&](const Vec& pa, const Vec& pb) {
    double maxd = 0.0;
    for (int k = 0; k < pa.size(); ++k) maxd = std::max(maxd, std::norm(pa[k]));
    for (int k = 0; k < pb.size(); ++k) maxd = std::max(maxd, std::norm(pb[k]));
    return 1e-12 * std::max(maxd, 1e-300);
  };
  const auto loglik = [&](const Vec& c) {
    const Vec pa = A * c;
    const Vec pb = B * c;
    const double eps = clamp_floor(pa, pb);
    double ll = 0.0;
    for (int k = 0; k < pa.size(); ++k) ll += std::log(std::max(std::norm(pa[k]), eps));
    for (int k = 0; k < pb.size(); ++k) ll += std::log(std::max(std::norm(pb[k]), eps));
    return ll;
  };
  const auto raw_map = [&](const Vec& c) {  // (R c)/(n+m), amplitude form
    const Vec pa = A * c;
    const Vec pb = B * c;
    const double eps_amp = std::sqrt(clamp_floor(pa, pb));
    Vec f = Vec::Zero(s);
    for (int k = 0; k < pa.size(); ++k) {
      cxd d = std::conj(pa[k]);
      const double mag = std::abs(d);
      if (mag < eps_amp) d = mag > 0.0 ? d * (eps_amp / mag) : cxd(eps_amp, 0.0);
      f += A.row(k).conjugate().transpose() / d;
    }
    for (int k = 0; k < pb.size(); ++k) {
      cxd d = std::conj(pb[k]);
      const double mag = std::abs(d);
      if (mag < eps_amp) d = mag > 0.0 ? d * (eps_amp / mag) : cxd(eps_amp, 0.0);
      f += B.row(k).conjugate().transpose() / d;
    }
    return Vec(f / total);
  };

  int iter_count = 0;
  const auto inner_solve = [&](double lambda2, const Vec& init) {
    const auto map = [&, lambda2](const Vec& c) {
      const Vec f = raw_map(c);  // = R c / (n+m)
      const double lambda1 = total - lambda2 * mean_energy_of(c, energies);
      Vec g(s);
      for (int i = 0; i < s; ++i) {
        double den = (lambda1 + lambda2 * energies[i]) / total;
        if (std::abs(den) < 1e-3) den = (den >= 0.0 ? 1.0 : -1.0) * 1e-3;
        g[i] = f[i] / den;
      }
      return g;
    };
    const auto merit = [&, lambda2](const Vec& c) {
      return loglik(c) - lambda2 * (mean_energy_of(c, energies) - e_bar);
    };
    FixedPointOutcome fp =
        damped_fixed_point(init, map, merit, config.inner, total);
    iter_count += fp.iterations;
    return fp;
  };

  // Spectral initialization shared with the unconstrained path.
  Vec init = config.inner.init ? *config.inner.init
                               : mle_spectral_init(samples, *basis);

  ConstrainedEstimate out;
  out.e_bar = e_bar;
  out.basis_size_used = s;

  const auto finish = [&](const FixedPointOutcome& fp, double lambda2) {
    out.state = StateVector::make(basis, fp.c);
    out.lambda2 = lambda2;
    out.lambda1 = total - lambda2 * e_bar;
    out.iterations = iter_count;
    out.loglik = loglik(fp.c);
    out.converged = fp.converged;
    // Certificate: || R c - (lambda1 + lambda2 E) c || / (n+m).
    const Vec f = raw_map(fp.c);
    Vec rhs(s);
    for (int i = 0; i < s; ++i)
      rhs[i] = (out.lambda1 + lambda2 * energies[i]) / total * fp.c[i];
    out.residual = (f - rhs).norm();
    out.covariance = constrained_covariance(fp.c, energies, samples.total());
    return out;
  };

  if (config.lambda2_fixed) {
    FixedPointOutcome fp = inner_solve(*config.lambda2_fixed, init);
    return finish(fp, *config.lambda2_fixed);
  }

  FixedPointOutcome fp0 = inner_solve(0.0, init);
  double g0 = mean_energy_of(fp0.c, energies) - e_bar;
  if (std::abs(g0) < tol_e) return finish(fp0, 0.0);

  // Bracket: <E>(c(lambda2)) decreases as lambda2 grows. Start from a scale
  // set by the unconstrained energy spread and expand geometrically.
  const double sigma_e =
      std::sqrt(std::max(energy_variance_of(fp0.c, energies), 1e-12));
  double step = total / sigma_e / 4.0;
  double lo = 0.0, hi = (g0 > 0.0 ? step : -step);
  FixedPointOutcome fp_hi = fp0;
  double ghi = g0;
  bool bracketed = false;
  for (int tries = 0; tries < 60; ++tries) {
    fp_hi = inner_solve(hi, fp_hi.c);
    ghi = mean_energy_of(fp_hi.c, energies) - e_bar;
    if ((g0 > 0.0 && ghi <= 0.0) || (g0 < 0.0 && ghi >= 0.0)) {
      bracketed = true;
      break;
    }
    lo = hi;
    hi *= 2.0;
  }
  if (!bracketed)
    throw infeasible_error("solve_constrained: could not bracket lambda2");

  // Bisection to the energy tolerance; also keep |lambda2| * residual small
  // so the multiplier identity holds to the advertised precision.
  double a = lo, b = hi;
  FixedPointOutcome fp_mid = fp_hi;
  double gmid = ghi;
  Vec warm = fp_hi.c;
  double mid = hi;
  for (int it = 0; it < config.max_outer; ++it) {
    mid = 0.5 * (a + b);
    fp_mid = inner_solve(mid, warm);
    warm = fp_mid.c;
    gmid = mean_energy_of(fp_mid.c, energies) - e_bar;
    const bool tight = std::abs(gmid) < tol_e &&
                       std::abs(mid) * std::abs(gmid) < 0.5e-6 * total;
    if (tight) break;
    if ((g0 > 0.0) == (gmid > 0.0))
      a = mid;
    else
      b = mid;
  }
  ConstrainedEstimate res = finish(fp_mid, mid);
  if (std::abs(gmid) >= tol_e) {
    res.converged = false;
    res.warning = "energy constraint met only to " + std::to_string(gmid);
  }
  return res;
}

std::pair<StateVector, TimeGauge> time_gauge_fix(const StateVector& estimate,
                                                 const StateVector& reference,
                                                 const RealVec& energies) {
  if (estimate.basis != reference.basis)
    throw std::invalid_argument("time_gauge_fix: states use different bases");
  const int s = estimate.size();
  if (energies.size() != s)
    throw std::invalid_argument("time_gauge_fix: energies dimension mismatch");

  const double var_e = energy_variance_of(reference.c, energies);
  constexpr double kVarFloor = 1e-10;
  if (var_e <= kVarFloor) {
    // Degenerate spectrum seen by the reference: time translation and gauge
    // coincide; fall back to the global phase fix.
    StateVector fixed = gauge_fix(estimate, reference);
    return {fixed, TimeGauge{0.0, 0.0}};
  }

  // Maximize f(alpha,t0) = Re sum_j e^{i(alpha+E_j t0)} h_j over the two
  // transformation parameters, h_j = estimate_j reference_j*. Coarse scan
  // (phases live on tori) then Newton on the stationarity conditions
  // Im sum e^{i theta_j} h_j = 0, Im sum E_j e^{i theta_j} h_j = 0 --
  // each Newton step is the paper-form 2x2 linear system.
  std::vector<cxd> h(s);
  for (int jj = 0; jj < s; ++jj)
    h[jj] = estimate.c[jj] * std::conj(reference.c[jj]);

  const auto objective = [&](double alpha, double t0) {
    double f = 0.0;
    for (int jj = 0; jj < s; ++jj) {
      const double th = alpha + energies[jj] * t0;
      f += (h[jj] * cxd(std::cos(th), std::sin(th))).real();
    }
    return f;
  };

  // Scan box: the objective is 2pi-periodic in alpha; in t0 the period is
  // 2pi over the minimal energy gap (exact for integer-spaced spectra).
  double min_gap = 1e300;
  const double emax = energies.maxCoeff(), emin = energies.minCoeff();
  for (int i = 0; i < s; ++i)
    for (int jj = i + 1; jj < s; ++jj) {
      const double gap = std::abs(energies[i] - energies[jj]);
      if (gap > 1e-12) min_gap = std::min(min_gap, gap);
    }
  if (min_gap > 1e299) min_gap = std::max(emax - emin, 1.0);
  const double t_span =
      std::min(2.0 * kPi / min_gap, 100.0 * 2.0 * kPi / std::max(emax - emin, 1e-6));
  double best_f = -1e300, best_a = 0.0, best_t = 0.0;
  constexpr int kScanA = 64, kScanT = 128;
  for (int ia = 0; ia < kScanA; ++ia) {
    const double alpha = -kPi + 2.0 * kPi * ia / kScanA;
    for (int itt = 0; itt < kScanT; ++itt) {
      const double t0 = -t_span / 2.0 + t_span * itt / kScanT;
      const double f = objective(alpha, t0);
      if (f > best_f) {
        best_f = f;
        best_a = alpha;
        best_t = t0;
      }
    }
  }

  double alpha = best_a, t0 = best_t;
  for (int newton = 0; newton < 100; ++newton) {
    double e1 = 0.0, e2 = 0.0, j11 = 0.0, j12 = 0.0, j22 = 0.0;
    for (int jj = 0; jj < s; ++jj) {
      const double th = alpha + energies[jj] * t0;
      const cxd rot = h[jj] * cxd(std::cos(th), std::sin(th));
      e1 += rot.imag();
      e2 += energies[jj] * rot.imag();
      j11 += rot.real();
      j12 += energies[jj] * rot.real();
      j22 += sqr(energies[jj]) * rot.real();
    }
    const double det = j11 * j22 - j12 * j12;
    if (std::abs(det) < 1e-14)
      throw std::runtime_error("time_gauge_fix: singular phase system");
    const double da = (-e1 * j22 + e2 * j12) / det;
    const double dt = (-e2 * j11 + e1 * j12) / det;
    alpha += da;
    t0 += dt;
    if (std::abs(da) + std::abs(dt) < 1e-14) break;
  }

  StateVector out = estimate;
  for (int jj = 0; jj < s; ++jj) {
    const double th = alpha + energies[jj] * t0;
    out.c[jj] = estimate.c[jj] * cxd(std::cos(th), std::sin(th));
  }
  return {out, TimeGauge{alpha, t0}};
}

Mat constrained_covariance(const Vec& c, const RealVec& energies, long n_plus_m) {
  const int s = static_cast<int>(c.size());
  if (energies.size() != s)
    throw std::invalid_argument("constrained_covariance: dimension mismatch");
  const double ebar = mean_energy_of(c, energies);
  const double var_e = energy_variance_of(c, energies);
  if (var_e <= 0.0)
    throw data_error("constrained_covariance: zero energy variance");

  const double total = static_cast<double>(n_plus_m);
  Mat sigma(s, s);
  for (int i = 0; i < s; ++i) {
    for (int jj = 0; jj < s; ++jj) {
      const double w =
          1.0 + (energies[i] - ebar) * (energies[jj] - ebar) / var_e;
      sigma(i, jj) = ((i == jj ? 1.0 : 0.0) - c[i] * std::conj(c[jj]) * w) / total;
    }
  }

  // Factor-loadings route: complete {c, (E - Ebar) c / sigma_E} to a unitary
  // and drop those two columns; Sigma = L L^+ / (n+m).
  Vec u0 = c;
  Vec u1(s);
  for (int i = 0; i < s; ++i)
    u1[i] = (energies[i] - ebar) * c[i] / std::sqrt(var_e);
  Mat proj = Mat::Identity(s, s) - u0 * u0.adjoint() - u1 * u1.adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> es((proj + proj.adjoint()) / 2.0);
  Mat l(s, s - 2);
  int col = 0;
  for (int i = 0; i < s; ++i) {
    if (es.eigenvalues()[i] > 0.5) {
      if (col >= s - 2)
        throw std::logic_error("constrained_covariance: projector rank > s-2");
      l.col(col++) = es.eigenvectors().col(i);
    }
  }
  if (col != s - 2)
    throw std::logic_error("constrained_covariance: projector rank != s-2");
  const Mat sigma_l = l * l.adjoint() / total;
  if ((sigma_l - sigma).cwiseAbs().maxCoeff() > 1e-10)
    throw std::logic_error(
        "constrained_covariance: factor-loadings route disagrees");
  return sigma;
}

int optimal_basis_size(double r, double f, long n_plus_m) {
  if (r <= 0.0 || f <= 0.0)
    throw std::invalid_argument("optimal_basis_size: r and f must be positive");
  const double v = std::pow(r * f * static_cast<double>(n_plus_m), 1.0 / (r + 1.0));
  return std::max(1, static_cast<int>(std::lround(v)));
}

}  // namespace qroot
