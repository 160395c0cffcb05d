// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/spin.hpp"

#include "qroot/root_mle.hpp"

#include <algorithm>
#include <cmath>

namespace qroot {

namespace {

bool is_half_integer_spin(double j) {
  const double twice = 2.0 * j;
  return j > 0.0 && std::abs(twice - std::lround(twice)) < 1e-12;
}

double lfact(int n) { return std::lgamma(n + 1.0); }

// Gauge convention for reported spinors: largest-modulus component made real
// positive.
Vec report_gauge(const Vec& c) {
  int piv = 0;
  double best = 0.0;
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) > best) {
      best = std::abs(c[i]);
      piv = i;
    }
  if (best == 0.0) return c;
  return c * (std::conj(c[piv]) / best);
}

void check_noncoplanar(const std::vector<std::pair<double, double>>& dirs) {
  if (dirs.size() < 3)
    throw data_error("spin MLE: need measurements along at least 3 directions");
  Eigen::MatrixXd d(3, dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const auto [th, ph] = dirs[k];
    d(0, k) = std::sin(th) * std::cos(ph);
    d(1, k) = std::sin(th) * std::sin(ph);
    d(2, k) = std::cos(th);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  if (svd.singularValues()(2) < 1e-8)
    throw data_error(
        "spin MLE: directions are coplanar; the state is not identifiable");
}

constexpr double kProbClamp = 1e-12;

}  // namespace

Spinor Spinor::make(double j, Vec c) {
  if (!is_half_integer_spin(j))
    throw std::invalid_argument("Spinor: j must be a positive half-integer");
  if (c.size() != static_cast<int>(std::lround(2.0 * j)) + 1)
    throw std::invalid_argument("Spinor: dimension must be 2j+1");
  const double nrm = c.norm();
  if (std::abs(nrm - 1.0) > 1e-6)
    throw std::invalid_argument("Spinor: not normalized");
  c /= nrm;
  return Spinor{j, std::move(c)};
}

std::pair<double, double> spin_half_probs(const Vec& c, double theta,
                                          double phi) {
  if (c.size() != 2) throw std::invalid_argument("spin_half_probs: need 2 amplitudes");
  const double ct = std::cos(theta), st = std::sin(theta);
  const cxd cross = std::exp(cxd(0.0, -phi)) * std::conj(c[0]) * c[1];
  const double p_plus = 0.5 * ((1.0 + ct) * std::norm(c[0]) +
                               (1.0 - ct) * std::norm(c[1]) + 2.0 * st * cross.real());
  return {p_plus, 1.0 - p_plus};
}

Mat wigner_d(double j, double alpha, double beta, double gamma) {
  if (!is_half_integer_spin(j))
    throw std::invalid_argument("wigner_d: j must be a positive half-integer");
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;
  const int twoj = dim - 1;

  const double cb = std::cos(beta / 2.0), sb = std::sin(beta / 2.0);
  Mat d(dim, dim);
  for (int rp = 0; rp < dim; ++rp) {    // row: m' = j - rp
    for (int rc = 0; rc < dim; ++rc) {  // col: m = j - rc
      const double mp = j - rp;
      const double m = j - rc;
      // little-d sum; k ranges so all factorial arguments stay nonnegative
      const int jpm = static_cast<int>(std::lround(j + m));
      const int jmm = static_cast<int>(std::lround(j - m));
      const int jpmp = static_cast<int>(std::lround(j + mp));
      const int jmmp = static_cast<int>(std::lround(j - mp));
      const int kmin = std::max(0, static_cast<int>(std::lround(m - mp)));
      const int kmax = std::min(jpm, jmmp);
      double sum = 0.0;
      const double lpref =
          0.5 * (lfact(jpm) + lfact(jmm) + lfact(jpmp) + lfact(jmmp));
      for (int k = kmin; k <= kmax; ++k) {
        const int a = jpm - k;           // j + m - k
        const int b = k;                 //
        const int cc = jmmp - k;         // j - m' - k
        const int dd = k - jpm + jpmp;   // k - m + m'
        const double lden = lfact(a) + lfact(b) + lfact(cc) + lfact(dd);
        const int cpow = twoj - 2 * k + jpm - jpmp;  // 2j - 2k + m - m'
        const int spow = 2 * k - jpm + jpmp;         // 2k - m + m'
        const double term = std::exp(lpref - lden) *
                            std::pow(cb, cpow) * std::pow(sb, spow);
        sum += ((dd % 2) == 0 ? term : -term);
      }
      const double ang_a = -mp * alpha;
      const double ang_g = -m * gamma;
      d(rp, rc) = cxd(std::cos(ang_a), std::sin(ang_a)) * sum *
                  cxd(std::cos(ang_g), std::sin(ang_g));
    }
  }
  return d;
}

Vec rotated_spinor(const Vec& c, double j, double theta, double phi) {
  const Mat d = wigner_d(j, phi, theta, 0.0);
  return d.adjoint() * c;
}

SpinEstimate solve_spin_half(const SpinCounts& counts, const SolverConfig& config) {
  if (counts.counts.cols() != 2)
    throw std::invalid_argument("solve_spin_half: counts are not spin-1/2");
  check_noncoplanar(counts.directions);
  const long total = counts.total();
  if (total < 1) throw data_error("solve_spin_half: no counts");

  const int ndir = static_cast<int>(counts.directions.size());
  RealVec ct(ndir), st(ndir);
  Vec em(ndir);
  RealVec np(ndir), nm(ndir);
  for (int k = 0; k < ndir; ++k) {
    const auto [th, ph] = counts.directions[k];
    ct[k] = std::cos(th);
    st[k] = std::sin(th);
    em[k] = std::exp(cxd(0.0, -ph));
    np[k] = counts.counts(k, 0);
    nm[k] = counts.counts(k, 1);
  }

  const auto probs = [&](const Vec& c, int k) {
    const double cross = (em[k] * std::conj(c[0]) * c[1]).real();
    double pp = 0.5 * ((1.0 + ct[k]) * std::norm(c[0]) +
                       (1.0 - ct[k]) * std::norm(c[1]) + 2.0 * st[k] * cross);
    pp = std::clamp(pp, 0.0, 1.0);
    return std::pair<double, double>{pp, 1.0 - pp};
  };
  const auto ll = [&](const Vec& c) {
    double out = 0.0;
    for (int k = 0; k < ndir; ++k) {
      const auto [pp, pm] = probs(c, k);
      if (np[k] > 0.0) out += np[k] * std::log(std::max(pp, kProbClamp));
      if (nm[k] > 0.0) out += nm[k] * std::log(std::max(pm, kProbClamp));
    }
    return out;
  };
  const auto map = [&](const Vec& c) {
    Vec f = Vec::Zero(2);
    for (int k = 0; k < ndir; ++k) {
      const auto [pp, pm] = probs(c, k);
      const double wp = np[k] / std::max(pp, kProbClamp);
      const double wm = nm[k] / std::max(pm, kProbClamp);
      f[0] += wp * ((1.0 + ct[k]) * c[0] + st[k] * em[k] * c[1]) / 2.0 +
              wm * ((1.0 - ct[k]) * c[0] - st[k] * em[k] * c[1]) / 2.0;
      f[1] += wp * (st[k] * std::conj(em[k]) * c[0] + (1.0 - ct[k]) * c[1]) / 2.0 +
              wm * (-st[k] * std::conj(em[k]) * c[0] + (1.0 + ct[k]) * c[1]) / 2.0;
    }
    return Vec(f / static_cast<double>(total));
  };

  Vec init = config.init ? *config.init
                         : Vec(Vec::Constant(2, 1.0 / std::sqrt(2.0)));
  FixedPointOutcome best = damped_fixed_point(init, map, ll, config);
  if (config.refine_conjugate) {
    try {
      FixedPointOutcome alt =
          damped_fixed_point(best.c.conjugate(), map, ll, config);
      if (alt.loglik > best.loglik) best = alt;
    } catch (const convergence_error&) {
    }
  }

  SpinEstimate res;
  res.state = Spinor::make(0.5, report_gauge(best.c));
  res.iterations = best.iterations;
  res.residual = best.residual;
  res.loglik = best.loglik;
  res.converged = best.converged;
  return res;
}

SpinEstimate solve_spin_general(const SpinCounts& counts, double j,
                                const SolverConfig& config) {
  if (!is_half_integer_spin(j))
    throw std::invalid_argument("solve_spin_general: bad j");
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;
  if (counts.counts.cols() != dim)
    throw std::invalid_argument("solve_spin_general: counts/j mismatch");
  check_noncoplanar(counts.directions);
  const long total = counts.total();
  if (total < 1) throw data_error("solve_spin_general: no counts");

  const int ndir = static_cast<int>(counts.directions.size());
  std::vector<Mat> dmats(ndir);
  for (int k = 0; k < ndir; ++k) {
    const auto [th, ph] = counts.directions[k];
    dmats[k] = wigner_d(j, ph, th, 0.0);
  }

  SpinEstimate res;
  if (ndir < dim)
    res.warning = "fewer directions than 2j+1; estimate may be unidentifiable";

  const auto ll = [&](const Vec& c) {
    double out = 0.0;
    for (int k = 0; k < ndir; ++k) {
      const Vec rot = dmats[k].adjoint() * c;
      for (int q = 0; q < dim; ++q) {
        const double cnt = counts.counts(k, q);
        if (cnt > 0.0)
          out += cnt * std::log(std::max(std::norm(rot[q]), kProbClamp));
      }
    }
    return out;
  };
  const auto map = [&](const Vec& c) {
    Vec f = Vec::Zero(dim);
    for (int k = 0; k < ndir; ++k) {
      const Vec rot = dmats[k].adjoint() * c;  // psi~ in the rotated frame
      double maxp = 0.0;
      for (int q = 0; q < dim; ++q) maxp = std::max(maxp, std::norm(rot[q]));
      const double eps = std::sqrt(kProbClamp * std::max(maxp, 1e-300));
      for (int q = 0; q < dim; ++q) {
        const double cnt = counts.counts(k, q);
        if (cnt == 0.0) continue;
        cxd den = std::conj(rot[q]);
        const double mag = std::abs(den);
        if (mag < eps) den = mag > 0.0 ? den * (eps / mag) : cxd(eps, 0.0);
        // Psi_m <- sum N_{m'} D_{m m'} / psi~*_{m'}
        f += cnt * dmats[k].col(q) / den;
      }
    }
    return Vec(f / static_cast<double>(total));
  };

  Vec init = config.init ? *config.init
                         : Vec(Vec::Constant(dim, 1.0 / std::sqrt(double(dim))));
  FixedPointOutcome best = damped_fixed_point(init, map, ll, config);
  if (config.refine_conjugate) {
    try {
      FixedPointOutcome alt =
          damped_fixed_point(best.c.conjugate(), map, ll, config);
      if (alt.loglik > best.loglik) best = alt;
    } catch (const convergence_error&) {
    }
  }

  res.state = Spinor::make(j, report_gauge(best.c));
  res.iterations = best.iterations;
  res.residual = best.residual;
  res.loglik = best.loglik;
  res.converged = best.converged;
  return res;
}

SpinHomogeneity spin_homogeneity(const Spinor& c1, long n1, const Spinor& c2,
                                 long n2, double alpha_level) {
  if (c1.j != c2.j)
    throw std::invalid_argument("spin_homogeneity: spins differ");
  if (alpha_level <= 0.0 || alpha_level >= 1.0)
    throw std::invalid_argument("spin_homogeneity: alpha must be in (0,1)");
  SpinHomogeneity out;
  out.alpha = alpha_level;
  out.report = homogeneity_test(c1.c, n1, c2.c, n2);
  const double dof = 4.0 * c1.j;
  out.quantile = chi_squared_quantile(1.0 - alpha_level, dof) / 2.0;
  out.reject = out.report.statistic > out.quantile;
  return out;
}

}  // namespace qroot
