// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/root_mle.hpp"

#include <algorithm>
#include <cmath>

namespace qroot {

namespace {

constexpr double kDensityClampFactor = 1e-12;

// Basis values at the sample points: A (n x s) coordinate, B (m x s) momentum.
struct SampleTables {
  Mat A;
  Mat B;
};

SampleTables tabulate(const SampleSet& samples, const BasisSet& basis) {
  SampleTables t;
  t.A = basis.eval_coord(samples.coord);
  t.B = basis.eval_mom(samples.mom);
  return t;
}

// Density clamp floor for the current amplitude set.
double clamp_floor(const Vec& psi_a, const Vec& psi_b) {
  double maxd = 0.0;
  for (int k = 0; k < psi_a.size(); ++k) maxd = std::max(maxd, std::norm(psi_a[k]));
  for (int k = 0; k < psi_b.size(); ++k) maxd = std::max(maxd, std::norm(psi_b[k]));
  return kDensityClampFactor * std::max(maxd, 1e-300);
}

double loglik_from_tables(const SampleTables& t, const Vec& c) {
  const Vec pa = t.A * c;
  const Vec pb = t.B * c;
  const double eps = clamp_floor(pa, pb);
  double ll = 0.0;
  for (int k = 0; k < pa.size(); ++k) ll += std::log(std::max(std::norm(pa[k]), eps));
  for (int k = 0; k < pb.size(); ++k) ll += std::log(std::max(std::norm(pb[k]), eps));
  return ll;
}

// F_i(c) = (1/(n+m)) [ sum_k phi_i*(x_k)/psi*(x_k) + momentum analog ].
// Zero-amplitude denominators are clamped in modulus, keeping their phase.
Vec likelihood_map(const SampleTables& t, const Vec& c) {
  const int total = static_cast<int>(t.A.rows() + t.B.rows());
  const Vec pa = t.A * c;
  const Vec pb = t.B * c;
  const double eps_amp = std::sqrt(clamp_floor(pa, pb));
  Vec f = Vec::Zero(c.size());
  for (int k = 0; k < pa.size(); ++k) {
    cxd d = std::conj(pa[k]);
    const double mag = std::abs(d);
    if (mag < eps_amp) d = mag > 0.0 ? d * (eps_amp / mag) : cxd(eps_amp, 0.0);
    f += t.A.row(k).conjugate().transpose() / d;
  }
  for (int k = 0; k < pb.size(); ++k) {
    cxd d = std::conj(pb[k]);
    const double mag = std::abs(d);
    if (mag < eps_amp) d = mag > 0.0 ? d * (eps_amp / mag) : cxd(eps_amp, 0.0);
    f += t.B.row(k).conjugate().transpose() / d;
  }
  return f / static_cast<double>(total);
}

// Leading eigenvector of R evaluated at the maximally mixed reference
// density (1/s) sum_j |phi_j|^2. Complex-valued and deterministic; lands in
// the attraction basin of the dominant likelihood mode in practice.
Vec spectral_init(const SampleTables& t) {
  const int s = static_cast<int>(t.A.cols());
  Mat r = Mat::Zero(s, s);
  for (int k = 0; k < t.A.rows(); ++k) {
    const double den = t.A.row(k).squaredNorm() / s;
    if (den > 0.0) r += t.A.row(k).adjoint() * t.A.row(k) / den;
  }
  for (int k = 0; k < t.B.rows(); ++k) {
    const double den = t.B.row(k).squaredNorm() / s;
    if (den > 0.0) r += t.B.row(k).adjoint() * t.B.row(k) / den;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es((r + r.adjoint()) / 2.0);
  return es.eigenvectors().col(s - 1);
}

FixedPointOutcome run_with_refinement(const SampleTables& t, const Vec& init,
                                      const SolverConfig& config, int total) {
  const auto map = [&t](const Vec& c) { return likelihood_map(t, c); };
  const auto ll = [&t](const Vec& c) { return loglik_from_tables(t, c); };
  FixedPointOutcome best =
      damped_fixed_point(init, map, ll, config, static_cast<double>(total));
  if (config.refine_conjugate) {
    try {
      FixedPointOutcome alt = damped_fixed_point(best.c.conjugate(), map, ll,
                                                 config, static_cast<double>(total));
      if (alt.loglik > best.loglik) best = alt;
    } catch (const convergence_error&) {
      // keep the converged branch
    }
  }
  return best;
}

int pivot_index(const Vec& c) {
  int piv = 0;
  double best = 0.0;
  for (int i = 0; i < c.size(); ++i) {
    const double a = std::abs(c[i]);
    if (a > best) {
      best = a;
      piv = i;
    }
  }
  return piv;
}

}  // namespace

RMatrix build_R(const SampleSet& samples, const BasisSet& basis,
                const StateVector& state) {
  if (samples.total() < 1) throw data_error("build_R: empty sample set");
  const SampleTables t = tabulate(samples, basis);
  const Vec pa = t.A * state.c;
  const Vec pb = t.B * state.c;
  const double eps = clamp_floor(pa, pb);

  const int s = basis.size();
  Mat r = Mat::Zero(s, s);
  long clamped = 0;
  for (int k = 0; k < pa.size(); ++k) {
    const double den = std::norm(pa[k]);
    if (den < eps) ++clamped;
    r += t.A.row(k).adjoint() * t.A.row(k) / std::max(den, eps);
  }
  for (int k = 0; k < pb.size(); ++k) {
    const double den = std::norm(pb[k]);
    if (den < eps) ++clamped;
    r += t.B.row(k).adjoint() * t.B.row(k) / std::max(den, eps);
  }
  if (clamped == samples.total())
    throw data_error("build_R: all sample points lie in a zero-density region");
  return RMatrix{(r + r.adjoint()) / 2.0, samples.n(), samples.m()};
}

double loglik_samples(const SampleSet& samples, const StateVector& state) {
  const SampleTables t = tabulate(samples, *state.basis);
  return loglik_from_tables(t, state.c);
}

Vec mle_spectral_init(const SampleSet& samples, const BasisSet& basis) {
  const SampleTables t = tabulate(samples, basis);
  return spectral_init(t);
}

EstimateResult solve_mle(const SampleSet& samples,
                         std::shared_ptr<const BasisSet> basis,
                         const SolverConfig& config) {
  if (samples.total() < 1) throw data_error("solve_mle: empty sample set");
  const int s = basis->size();
  const int total = samples.total();

  const SampleTables t = tabulate(samples, *basis);
  Vec init = config.init ? *config.init : spectral_init(t);
  FixedPointOutcome fp = run_with_refinement(t, init, config, total);

  EstimateResult res;
  res.state = StateVector::make(basis, fp.c);
  res.iterations = fp.iterations;
  res.residual = fp.residual;  // == ||R c - (n+m) c||/(n+m)
  res.loglik = fp.loglik;
  res.converged = fp.converged;
  std::tie(res.fisher, res.covariance) = fisher_and_covariance(fp.c, total);
  if (s > total)
    res.warning = "basis size exceeds sample count; estimate is underdetermined";
  return res;
}

Vec gauge_fix(const Vec& estimate, const Vec& reference) {
  const cxd z = reference.dot(estimate);  // <reference, estimate>
  if (std::abs(z) == 0.0) return estimate;
  return estimate * (std::conj(z) / std::abs(z));
}

StateVector gauge_fix(const StateVector& estimate, const StateVector& reference) {
  if (estimate.basis != reference.basis)
    throw std::invalid_argument("gauge_fix: states use different bases");
  StateVector out = estimate;
  out.c = gauge_fix(estimate.c, reference.c);
  return out;
}

std::pair<Mat, Mat> fisher_and_covariance(const Vec& c, long n_plus_m) {
  const int s = static_cast<int>(c.size());
  const int piv = pivot_index(c);
  const double piv2 = std::norm(c[piv]);

  Mat fisher(s - 1, s - 1);
  int row = 0;
  for (int i = 0; i < s; ++i) {
    if (i == piv) continue;
    int col = 0;
    for (int jj = 0; jj < s; ++jj) {
      if (jj == piv) continue;
      fisher(row, col) = static_cast<double>(n_plus_m) *
                         ((i == jj ? 1.0 : 0.0) + c[i] * std::conj(c[jj]) / piv2);
      ++col;
    }
    ++row;
  }
  Mat cov = (Mat::Identity(s, s) - c * c.adjoint()) /
            static_cast<double>(n_plus_m);
  return {fisher, cov};
}

ChiSqReport chisq_fidelity(const Vec& estimate, const Vec& truth, long N) {
  if (estimate.size() != truth.size())
    throw std::invalid_argument("chisq_fidelity: dimension mismatch");
  const double fid = std::norm(truth.dot(estimate));
  const double statistic = static_cast<double>(N) * (1.0 - fid);
  return make_half_chisq_report(std::max(statistic, 0.0),
                                static_cast<int>(estimate.size()) - 1);
}

ChiSqReport chisq_fidelity(const StateVector& estimate, const StateVector& truth,
                           long N) {
  if (estimate.basis != truth.basis)
    throw std::invalid_argument("chisq_fidelity: states use different bases");
  return chisq_fidelity(estimate.c, truth.c, N);
}

ChiSqReport homogeneity_test(const Vec& c1, long n1, const Vec& c2, long n2) {
  if (c1.size() != c2.size())
    throw std::invalid_argument("homogeneity_test: dimension mismatch");
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("homogeneity_test: sample sizes must be >= 1");
  const double pref = static_cast<double>(n1) * static_cast<double>(n2) /
                      static_cast<double>(n1 + n2);
  const double statistic = pref * (1.0 - std::norm(c1.dot(c2)));

  // Equivalent trace form over the pure density matrices.
  const Mat d = c2 * c2.adjoint() - c1 * c1.adjoint();
  const double trace_form = pref / 2.0 * (d * d).trace().real();
  if (std::abs(trace_form - statistic) > 1e-10 * std::max(1.0, std::abs(statistic)))
    throw std::logic_error("homogeneity_test: trace form mismatch");

  return make_half_chisq_report(std::max(statistic, 0.0),
                                static_cast<int>(c1.size()) - 1);
}

ChiSqReport homogeneity_test(const StateVector& c1, long n1,
                             const StateVector& c2, long n2) {
  if (c1.basis != c2.basis)
    throw std::invalid_argument("homogeneity_test: states use different bases");
  return homogeneity_test(c1.c, n1, c2.c, n2);
}

VectorEstimate register_mle(const Eigen::VectorXi& counts_coord,
                            const Eigen::VectorXi& counts_conj, const Mat& U,
                            const SolverConfig& config) {
  const int s = static_cast<int>(counts_coord.size());
  if (counts_conj.size() != s || U.rows() != s || U.cols() != s)
    throw std::invalid_argument("register_mle: dimension mismatch");
  if ((U.adjoint() * U - Mat::Identity(s, s)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("register_mle: U is not unitary");
  const long n = counts_coord.sum();
  const long m = counts_conj.sum();
  const long total = n + m;
  if (total < 1) throw data_error("register_mle: no counts");

  const RealVec nc = counts_coord.cast<double>();
  const RealVec mc = counts_conj.cast<double>();

  const auto clampc = [](cxd d, double eps) {
    const double mag = std::abs(d);
    if (mag >= eps) return d;
    return mag > 0.0 ? d * (eps / mag) : cxd(eps, 0.0);
  };
  const auto map = [&](const Vec& c) {
    const Vec ct = U * c;
    double maxp = 0.0;
    for (int i = 0; i < s; ++i)
      maxp = std::max({maxp, std::norm(c[i]), std::norm(ct[i])});
    const double eps = std::sqrt(kDensityClampFactor * std::max(maxp, 1e-300));
    Vec f = Vec::Zero(s);
    for (int i = 0; i < s; ++i)
      if (nc[i] != 0.0) f[i] += nc[i] / clampc(std::conj(c[i]), eps);
    for (int jj = 0; jj < s; ++jj)
      if (mc[jj] != 0.0) {
        const cxd den = clampc(std::conj(ct[jj]), eps);
        f += mc[jj] * U.row(jj).conjugate().transpose() / den;
      }
    return Vec(f / static_cast<double>(total));
  };
  const auto ll = [&](const Vec& c) {
    const Vec ct = U * c;
    double maxp = 0.0;
    for (int i = 0; i < s; ++i)
      maxp = std::max({maxp, std::norm(c[i]), std::norm(ct[i])});
    const double eps = kDensityClampFactor * std::max(maxp, 1e-300);
    double out = 0.0;
    for (int i = 0; i < s; ++i) {
      if (nc[i] != 0.0) out += nc[i] * std::log(std::max(std::norm(c[i]), eps));
      if (mc[i] != 0.0) out += mc[i] * std::log(std::max(std::norm(ct[i]), eps));
    }
    return out;
  };

  Vec init;
  if (config.init) {
    init = *config.init;
  } else {
    // sqrt of pooled relative frequencies, zero phases
    init = Vec::Zero(s);
    const Vec ubackm = U.adjoint() * mc.cast<cxd>();
    for (int i = 0; i < s; ++i)
      init[i] = std::sqrt((nc[i] + std::abs(ubackm[i])) / static_cast<double>(total));
    if (init.norm() == 0.0) init = Vec::Constant(s, 1.0 / std::sqrt(double(s)));
  }

  FixedPointOutcome best =
      damped_fixed_point(init, map, ll, config, static_cast<double>(total));
  if (config.refine_conjugate) {
    try {
      FixedPointOutcome alt = damped_fixed_point(best.c.conjugate(), map, ll,
                                                 config, static_cast<double>(total));
      if (alt.loglik > best.loglik) best = alt;
    } catch (const convergence_error&) {
    }
  }

  VectorEstimate res;
  res.c = best.c;
  res.iterations = best.iterations;
  res.residual = best.residual;
  res.loglik = best.loglik;
  res.converged = best.converged;
  std::tie(res.fisher, res.covariance) = fisher_and_covariance(best.c, total);
  return res;
}

PhaseRetrievalResult phase_retrieval(const GridFunction& hist_x,
                                     const GridFunction& hist_p, int max_iter) {
  const int n = static_cast<int>(hist_x.points.size());
  if (hist_p.points.size() != n)
    throw std::invalid_argument("phase_retrieval: histogram grids differ in size");
  if (max_iter < 1) throw std::invalid_argument("phase_retrieval: max_iter < 1");
  for (int i = 0; i < n; ++i)
    if (hist_x.values[i] < 0.0 || hist_p.values[i] < 0.0)
      throw std::invalid_argument("phase_retrieval: negative histogram values");

  const RealVec pexpect = conjugate_grid(hist_x.points);
  if ((pexpect - hist_p.points).cwiseAbs().maxCoeff() >
      1e-9 * std::max(1.0, pexpect.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(
        "phase_retrieval: momentum grid must be the conjugate grid of the "
        "coordinate grid");

  const double dx = hist_x.points[1] - hist_x.points[0];
  const double dp = hist_p.points[1] - hist_p.points[0];

  // Normalization check (the densities must integrate to ~1), then rescale
  // exactly so the two moduli carry consistent mass.
  const double mx = hist_x.values.sum() * dx;
  const double mp = hist_p.values.sum() * dp;
  if (std::abs(mx - 1.0) > 1e-6 || std::abs(mp - 1.0) > 1e-6)
    throw std::invalid_argument("phase_retrieval: histograms are not normalized");

  RealVec mod_x = (hist_x.values / mx).cwiseSqrt();
  RealVec mod_p = (hist_p.values / mp).cwiseSqrt();

  const auto phase_of = [](cxd z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : cxd(1.0, 0.0);
  };

  PhaseRetrievalResult out;
  out.grid = hist_x.points;
  Vec psi = mod_x.cast<cxd>();
  double prev_err = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    ConjugatePair ft = fourier_continuous(hist_x.points, psi);
    double err = 0.0;
    for (int k = 0; k < n; ++k)
      err += dp * sqr(std::abs(ft.values[k]) - mod_p[k]);
    err = std::sqrt(err);
    out.error_trace.push_back(err);
    out.iterations = it + 1;

    for (int k = 0; k < n; ++k) ft.values[k] = mod_p[k] * phase_of(ft.values[k]);
    Vec back = inverse_fourier_continuous(hist_x.points, ft.pgrid, ft.values);
    for (int k = 0; k < n; ++k) psi[k] = mod_x[k] * phase_of(back[k]);

    if (prev_err >= 0.0 && std::abs(prev_err - err) < 1e-12) break;
    prev_err = err;
  }
  out.psi = psi;
  return out;
}

}  // namespace qroot
