// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qroot/root_mle.hpp"
#include "qroot/sampler.hpp"

using namespace qroot;
using fixtures::osc;

namespace {

Vec random_state(int s, std::mt19937_64& eng) {
  std::normal_distribution<double> g;
  Vec c(s);
  for (int i = 0; i < s; ++i) c[i] = cxd(g(eng), g(eng));
  return c / c.norm();
}

}  // namespace

TEST_CASE("R matrix basics") {
  auto b1 = osc(1);
  Vec one(1);
  one << 1.0;
  const StateVector st1 = StateVector::make(b1, one);
  const SampleSet s1 = sample_complementary(st1, 12, 8, 3);
  const RMatrix r1 = build_R(s1, *b1, st1);
  // phi0* phi0 / |phi0|^2 contributes exactly 1 per sample
  CHECK(std::abs(r1.entries(0, 0) - cxd(20.0, 0.0)) < 1e-9);

  auto b2 = osc(2);
  std::mt19937_64 eng(11);
  const StateVector st2 = StateVector::make(b2, random_state(2, eng));
  const SampleSet s2 = sample_complementary(st2, 6, 4, 17);
  const RMatrix r2 = build_R(s2, *b2, st2);
  CHECK((r2.entries - r2.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  // c^+ R c = n + m identically for the state the densities came from
  CHECK(std::abs((st2.c.adjoint() * r2.entries * st2.c)(0, 0) - cxd(10.0, 0.0)) <
        1e-9);
}

TEST_CASE("MLE fixed point satisfies the eigenvalue certificate") {
  auto b = osc(3);
  const StateVector truth = StateVector::make(b, fixtures::fig3_state());
  const SampleSet samples = sample_complementary(truth, 200, 200, 21);
  const EstimateResult est = solve_mle(samples, b);
  CHECK(est.converged);

  const RMatrix r = build_R(samples, *b, est.state);
  const Vec lhs = r.entries * est.state.c;
  const Vec rhs = 400.0 * est.state.c;
  CHECK((lhs - rhs).norm() < 10.0 * 1e-9 * 400.0);  // scaled certificate
  CHECK((lhs - rhs).norm() / 400.0 == doctest::Approx(est.residual).epsilon(1e-6));
}

TEST_CASE("recovery from a concentrated state is accurate") {
  auto b = osc(3);
  Vec c0 = Vec::Zero(3);
  c0[0] = 1.0;
  const StateVector truth = StateVector::make(b, c0);
  const SampleSet samples = sample_complementary(truth, 1000, 1000, 5);
  const EstimateResult est = solve_mle(samples, b);
  CHECK(std::norm(truth.c.dot(est.state.c)) > 0.999);
}

TEST_CASE("single basis function is forced by normalization") {
  auto b = osc(1);
  Vec one(1);
  one << 1.0;
  const StateVector truth = StateVector::make(b, one);
  const SampleSet samples = sample_complementary(truth, 10, 10, 2);
  const EstimateResult est = solve_mle(samples, b);
  CHECK(std::abs(std::abs(est.state.c[0]) - 1.0) < 1e-12);
  CHECK(est.iterations <= 2);
}

TEST_CASE("fidelity statistic has the chi-square mean (replicated)") {
  auto b = osc(3);
  const Vec truth = fixtures::fig3_state();
  const StateVector truth_state = StateVector::make(b, truth);
  double mean = 0.0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const SampleSet samples =
        sample_complementary(truth_state, 200, 200, 9000 + r);
    const EstimateResult est = solve_mle(samples, b);
    mean += 400.0 * (1.0 - std::norm(truth.dot(est.state.c)));
  }
  mean /= reps;
  // chi~^2_2 has mean s-1 = 2
  CHECK(mean == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("gauge fixing removes a global phase") {
  auto b = osc(3);
  std::mt19937_64 eng(30);
  const Vec ref = random_state(3, eng);
  const cxd rot(std::cos(0.7), std::sin(0.7));
  const Vec rotated = rot * ref;

  const Vec fixed = gauge_fix(rotated, ref);
  CHECK((fixed - ref).norm() < 1e-12);

  // scalar product real nonnegative and brute-force optimality
  const Vec est = random_state(3, eng);
  const Vec g = gauge_fix(est, ref);
  const cxd ip = ref.dot(g);
  CHECK(std::abs(ip.imag()) < 1e-12);
  CHECK(ip.real() >= 0.0);
  CHECK((g - ref).norm() <= oracle::best_phase_distance(est, ref) + 1e-9);
}

TEST_CASE("fisher and covariance laws") {
  std::mt19937_64 eng(31);
  {
    Vec c(2);
    c << 1.0, 0.0;
    auto [fisher, cov] = fisher_and_covariance(c, 100);
    CHECK(std::abs(cov(0, 0)) < 1e-15);
    CHECK(std::abs(cov(1, 1) - cxd(0.01, 0.0)) < 1e-15);
    CHECK(fisher.rows() == 1);
    CHECK(std::abs(fisher(0, 0) - cxd(100.0, 0.0)) < 1e-12);
  }
  for (int trial = 0; trial < 5; ++trial) {
    const Vec c = random_state(3, eng);
    auto [fisher, cov] = fisher_and_covariance(c, 250);
    CHECK((cov * c).norm() < 1e-12);
    CHECK(std::abs(cov.trace().real() - 2.0 / 250.0) < 1e-10);
    Eigen::SelfAdjointEigenSolver<Mat> es(cov * 250.0);
    CHECK(std::abs(es.eigenvalues()[0]) < 1e-10);
    CHECK(std::abs(es.eigenvalues()[1] - 1.0) < 1e-10);
    CHECK(std::abs(es.eigenvalues()[2] - 1.0) < 1e-10);
    // fisher is Hermitian with the pivot removed
    CHECK((fisher - fisher.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fidelity chi-square report") {
  auto b = osc(3);
  std::mt19937_64 eng(32);
  const Vec c = random_state(3, eng);
  const StateVector st = StateVector::make(b, c);
  const ChiSqReport same = chisq_fidelity(st, st, 400);
  CHECK(same.statistic == doctest::Approx(0.0));
  CHECK(same.pvalue == doctest::Approx(1.0));
  CHECK(same.dof == 4);

  // equivalence with the density-matrix trace form on random pure pairs
  for (int trial = 0; trial < 20; ++trial) {
    const Vec a = random_state(4, eng);
    const Vec d = random_state(4, eng);
    const double lhs = 400.0 * (1.0 - std::norm(d.dot(a)));
    const Mat rho_a = a * a.adjoint();
    const Mat rho_d = d * d.adjoint();
    const Mat diff = rho_a - rho_d;
    const double rhs = 400.0 / 2.0 * (diff * diff).trace().real();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("homogeneity statistic and its trace form") {
  auto b = osc(2);
  Vec e0(2), e1(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  const StateVector s0 = StateVector::make(b, e0);
  const StateVector s1 = StateVector::make(b, e1);
  CHECK(homogeneity_test(s0, 100, s0, 100).statistic == doctest::Approx(0.0));
  const ChiSqReport orth = homogeneity_test(s0, 100, s1, 100);
  CHECK(orth.statistic == doctest::Approx(50.0));
  CHECK(orth.pvalue < 1e-12);
}

TEST_CASE("homogeneity false-positive rate is calibrated") {
  auto b = osc(3);
  const StateVector truth = StateVector::make(b, fixtures::fig3_state());
  int rejects = 0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const SampleSet sa = sample_complementary(truth, 100, 100, 40000 + 2 * r);
    const SampleSet sb = sample_complementary(truth, 100, 100, 40001 + 2 * r);
    const EstimateResult ea = solve_mle(sa, b);
    const EstimateResult eb = solve_mle(sb, b);
    const ChiSqReport rep = homogeneity_test(ea.state, 200, eb.state, 200);
    if (rep.pvalue < 0.05) ++rejects;
  }
  const double rate = static_cast<double>(rejects) / reps;
  CHECK(std::abs(rate - 0.05) < 0.02);
}

TEST_CASE("log-likelihood is gauge invariant") {
  auto b = osc(3);
  const StateVector truth = StateVector::make(b, fixtures::fig3_state());
  const SampleSet samples = sample_complementary(truth, 50, 50, 77);
  const double base = loglik_samples(samples, truth);
  std::mt19937_64 eng(78);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const double alpha = u(eng);
    StateVector rotated = truth;
    rotated.c *= cxd(std::cos(alpha), std::sin(alpha));
    CHECK(loglik_samples(samples, rotated) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("s=2 real states match a brute-force likelihood scan") {
  auto b = osc(2);
  std::mt19937_64 eng(55);
  std::uniform_real_distribution<double> u(0.2, 1.3);
  for (int trial = 0; trial < 5; ++trial) {
    const double tau = u(eng);
    Vec c0(2);
    c0 << std::cos(tau), std::sin(tau);
    const StateVector truth = StateVector::make(b, c0);
    const SampleSet samples =
        sample_complementary(truth, 200, 200, 600 + trial);
    const EstimateResult est = solve_mle(samples, b);

    double best = -1e300;
    for (double theta = 0.0; theta < kPi; theta += 1e-3) {
      Vec c(2);
      c << std::cos(theta), std::sin(theta);
      best = std::max(best,
                      loglik_samples(samples, StateVector::make(b, c)));
    }
    CHECK(std::abs(est.loglik - best) < 1e-4);
  }
}

TEST_CASE("register MLE with the Fourier unitary") {
  const Mat u = discrete_fourier_matrix(4);
  Vec c0(4);
  c0 << 0.6, cxd(0.45, 0.15), cxd(0.35, -0.1), 0.25;
  c0 /= c0.norm();
  const Vec ct = u * c0;
  const Eigen::VectorXi nc = sample_register(c0.cwiseAbs2(), 10000, 91);
  const Eigen::VectorXi mc = sample_register(ct.cwiseAbs2(), 10000, 92);
  const VectorEstimate est = register_mle(nc, mc, u);
  CHECK(est.converged);
  CHECK(std::norm(c0.dot(est.c)) > 0.999);
}

TEST_CASE("register MLE reduces to the multinomial root when U = I") {
  const Mat u = Mat::Identity(4, 4);
  Eigen::VectorXi nc(4), mc(4);
  nc << 10, 20, 30, 40;
  mc << 40, 30, 20, 10;
  const VectorEstimate est = register_mle(nc, mc, u);
  // analytic root: |c_i| = sqrt((n_i + m_i)/(n + m)) = 1/2 for every i
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(std::abs(est.c[i]) - 0.5) < 1e-6);
}

TEST_CASE("register MLE degenerate data and validation") {
  const Mat u = discrete_fourier_matrix(4);
  Eigen::VectorXi nc(4), mc(4);
  nc << 400, 0, 0, 0;
  mc << 100, 100, 100, 100;  // |U_j0|^2 = 1/4 exactly
  const VectorEstimate est = register_mle(nc, mc, u);
  CHECK(std::abs(std::abs(est.c[0]) - 1.0) < 1e-6);

  Mat bad = u;
  bad(0, 0) += 0.1;
  CHECK_THROWS_AS(register_mle(nc, mc, bad), std::invalid_argument);
}

TEST_CASE("phase retrieval fixes the real positive solution immediately") {
  // exact ground-state histograms on a self-dual grid
  const int bins = 64;
  const double dx = std::sqrt(2.0 * kPi / bins);
  GridFunction hx, hp;
  hx.points.resize(bins);
  hx.values.resize(bins);
  for (int i = 0; i < bins; ++i) {
    hx.points[i] = (i - bins / 2) * dx;
    const double f = oracle::hermite_function(0, hx.points[i]);
    hx.values[i] = f * f;
  }
  double mass = hx.values.sum() * dx;
  hx.values /= mass;
  hp = hx;  // ground state is Fourier self-dual

  const PhaseRetrievalResult pr = phase_retrieval(hx, hp, 50);
  for (int i = 0; i < bins; ++i) {
    CHECK(std::abs(pr.psi[i].imag()) < 1e-12);
    CHECK(pr.psi[i].real() == doctest::Approx(std::sqrt(hx.values[i])).epsilon(1e-10));
  }
  for (std::size_t it = 1; it < pr.error_trace.size(); ++it)
    CHECK(pr.error_trace[it] <= pr.error_trace[it - 1] + 1e-12);
}

TEST_CASE("phase retrieval reproduces an asymmetric state from samples") {
  auto b = osc(3);
  const StateVector truth = StateVector::make(b, fixtures::phase_retrieval_state());
  const SampleSet samples = sample_complementary(truth, 10000, 10000, 12);

  const int bins = 64;
  const double dx = std::sqrt(2.0 * kPi / bins);
  const double lo = -(bins / 2.0 + 0.5) * dx;
  GridFunction hx = histogram_density(samples.coord, lo, lo + bins * dx, bins);
  GridFunction hp = histogram_density(samples.mom, lo, lo + bins * dx, bins);
  hp.points = hx.points;

  const PhaseRetrievalResult pr = phase_retrieval(hx, hp, 300);
  for (std::size_t it = 1; it < pr.error_trace.size(); ++it)
    CHECK(pr.error_trace[it] <= pr.error_trace[it - 1] + 1e-12);

  const Vec psi_true = evaluate_psi(truth, Space::coordinate, pr.grid);
  const cxd z = psi_true.dot(pr.psi);
  const cxd rot = std::conj(z) / std::abs(z);
  const double sup = (rot * pr.psi - psi_true).cwiseAbs().maxCoeff();
  CHECK(sup < 0.1);

  GridFunction neg = hx;
  neg.values[0] = -1.0;
  CHECK_THROWS_AS(phase_retrieval(neg, hp, 10), std::invalid_argument);
}

TEST_CASE("degenerate data throws a data error") {
  auto b = osc(2);
  SampleSet s;
  CHECK_THROWS_AS(solve_mle(s, b), data_error);
}
