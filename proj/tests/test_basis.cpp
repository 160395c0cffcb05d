// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qroot/basis.hpp"

using namespace qroot;

namespace {

std::shared_ptr<const BasisSet> osc(int s) {
  return std::make_shared<const BasisSet>(BasisSet::oscillator(s));
}

Vec random_state(int s, std::mt19937_64& eng) {
  std::normal_distribution<double> g;
  Vec c(s);
  for (int i = 0; i < s; ++i) c[i] = cxd(g(eng), g(eng));
  return c / c.norm();
}

}  // namespace

TEST_CASE("ground state value at the origin") {
  auto b = osc(1);
  // pi^{-1/4}, cross-checked against the std::hermite oracle and a Simpson
  // normalization integral
  const double expected = 0.75112554446494248;
  CHECK(oracle::hermite_function(0, 0.0) == doctest::Approx(expected).epsilon(1e-12));
  const double norm = oracle::simpson(
      [](double x) { return oracle::hermite_function(0, x) * oracle::hermite_function(0, x); },
      -10.0, 10.0);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(std::abs(b->eval_coord(0.0)[0] - expected) < 1e-12);
}

TEST_CASE("odd functions vanish at the origin") {
  auto b = osc(2);
  CHECK(std::abs(b->eval_coord(0.0)[1]) < 1e-14);
}

TEST_CASE("library recurrence matches the std::hermite oracle") {
  for (int n : {0, 1, 2, 5, 12, 25}) {
    for (double x : {-3.7, -0.4, 0.0, 1.1, 4.9}) {
      const RealVec phi = hermite_functions(n + 1, x);
      CHECK(phi[n] == doctest::Approx(oracle::hermite_function(n, x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("gram matrix is the identity (s=10 vs quadrature oracle)") {
  auto b = osc(10);
  // oracle: Simpson integrals of oracle Hermite products
  for (int i = 0; i < 10; ++i) {
    for (int j = i; j < 10; ++j) {
      const double ref = oracle::simpson(
          [&](double x) {
            return oracle::hermite_function(i, x) * oracle::hermite_function(j, x);
          },
          -b->grid_halfwidth(), b->grid_halfwidth());
      CHECK(std::abs(ref - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
  }
  // library quadrature
  const Mat& phi = b->coord_values();
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      cxd g = 0.0;
      for (int k = 0; k < phi.rows(); ++k)
        g += b->quad_weights()[k] * std::conj(phi(k, i)) * phi(k, j);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("orthonormality holds through s=50 on the default grid") {
  for (int s : {25, 50}) {
    auto b = osc(s);
    const Mat& phi = b->coord_values();
    Mat gram = Mat::Zero(s, s);
    for (int k = 0; k < phi.rows(); ++k)
      gram += b->quad_weights()[k] * phi.row(k).adjoint() * phi.row(k);
    CHECK((gram - Mat::Identity(s, s)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("construction validates its inputs") {
  CHECK_THROWS_AS(BasisSet::oscillator(0, 8.0, 1024), std::invalid_argument);
  // [-8, 8] cannot hold 50 oscillator levels at the 1e-8 decay requirement
  CHECK_THROWS_AS(BasisSet::oscillator(50, 8.0, 1024), grid_error);
}

TEST_CASE("energies are n + 1/2 and strictly increasing") {
  auto b = osc(6);
  for (int i = 0; i < 6; ++i)
    CHECK(b->energies()[i] == doctest::Approx(i + 0.5));
}

TEST_CASE("momentum functions carry the (-i)^n Fourier phase") {
  auto b = osc(4);
  // phi~_1(0) = (-i) phi_1(0) = 0; phi~_2(p) = -phi_2(p)
  CHECK(std::abs(b->eval_mom(0.0)[1]) < 1e-14);
  const Vec m = b->eval_mom(1.3);
  const RealVec phi = hermite_functions(4, 1.3);
  CHECK(std::abs(m[2] - cxd(-phi[2], 0.0)) < 1e-14);
  CHECK(std::abs(m[1] - cxd(0.0, -1.0) * phi[1]) < 1e-14);
}

TEST_CASE("evaluate_psi basics") {
  auto b = osc(3);
  Vec c = Vec::Zero(3);
  c[0] = 1.0;
  const StateVector ground = StateVector::make(b, c);
  RealVec pts(1);
  pts[0] = 0.0;
  CHECK(std::abs(evaluate_psi(ground, Space::coordinate, pts)[0] -
                 oracle::hermite_function(0, 0.0)) < 1e-12);

  Vec c1 = Vec::Zero(3);
  c1[1] = 1.0;
  const StateVector first = StateVector::make(b, c1);
  CHECK(std::abs(evaluate_psi(first, Space::momentum, pts)[0]) < 1e-14);

  // density integrates to one
  Vec ceq(3);
  ceq << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  const StateVector eq = StateVector::make(b, ceq);
  const RealVec d = density_on_grid(eq, Space::coordinate);
  double mass = 0.0;
  for (int i = 0; i < d.size(); ++i) mass += b->quad_weights()[i] * d[i];
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

  RealVec outside(1);
  outside[0] = b->grid_halfwidth() + 1.0;
  CHECK_THROWS_AS(evaluate_psi(ground, Space::coordinate, outside),
                  std::domain_error);
}

TEST_CASE("parseval identity on oscillator eigenstates") {
  auto b = osc(2);
  Vec c0 = Vec::Zero(2);
  c0[0] = 1.0;
  auto [lhs0, rhs0] = verify_parseval(StateVector::make(b, c0));
  // <p^2> of the ground state is 1/2 (Simpson oracle on p^2 |phi~_0|^2)
  const double ref0 = oracle::simpson(
      [](double p) {
        const double f = oracle::hermite_function(0, p);
        return p * p * f * f;
      },
      -9.0, 9.0);
  CHECK(ref0 == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(lhs0 == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rhs0 == doctest::Approx(0.5).epsilon(1e-10));

  Vec c1 = Vec::Zero(2);
  c1[1] = 1.0;
  auto [lhs1, rhs1] = verify_parseval(StateVector::make(b, c1));
  CHECK(lhs1 == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(rhs1 == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("parseval residual stays below 1e-4 for random states") {
  std::mt19937_64 eng(2024);
  for (int s : {5, 12, 20}) {
    auto b = osc(s);
    for (int trial = 0; trial < 10; ++trial) {
      const StateVector st = StateVector::make(b, random_state(s, eng));
      auto [lhs, rhs] = verify_parseval(st);
      CHECK(std::abs(lhs - rhs) < 1e-4);
    }
  }
}

TEST_CASE("unitary DFT") {
  Vec impulse = Vec::Zero(4);
  impulse[0] = 1.0;
  const Vec flat = discrete_fourier(impulse);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(flat[k] - 0.5) < 1e-12);

  std::mt19937_64 eng(7);
  for (int n : {8, 6, 17}) {  // power of two and general sizes
    const Vec v = random_state(n, eng);
    const Vec f = discrete_fourier(v);
    CHECK(f.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
    CHECK((inverse_discrete_fourier(f) - v).norm() < 1e-12);
  }

  const Mat u = discrete_fourier_matrix(5);
  CHECK((u.adjoint() * u - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  const Vec v = random_state(5, eng);
  CHECK((u * v - discrete_fourier(v)).norm() < 1e-12);
}

TEST_CASE("continuous Fourier transform matches the analytic images") {
  // grid-sampled phi_n, DFT-transformed, must reproduce (-i)^n phi_n on the
  // conjugate grid (invariant tolerance 1e-6; observed ~1e-14)
  auto b = osc(20);
  const RealVec pgrid = conjugate_grid(b->grid());
  for (int n : {0, 1, 5, 19}) {
    Vec col = b->coord_values().col(n);
    const ConjugatePair t = fourier_continuous(b->grid(), col);
    cxd phase(1.0, 0.0);
    for (int q = 0; q < n; ++q) phase *= cxd(0.0, -1.0);
    double worst = 0.0;
    for (int k = 0; k < pgrid.size(); ++k) {
      const double ref = hermite_functions(n + 1, pgrid[k])[n];
      worst = std::max(worst, std::abs(t.values[k] - phase * ref));
    }
    CHECK(worst < 1e-6);
  }
  // round trip
  std::mt19937_64 eng(3);
  const Vec c = random_state(20, eng);
  Vec psi = b->coord_values() * c;
  const ConjugatePair t = fourier_continuous(b->grid(), psi);
  CHECK((inverse_fourier_continuous(b->grid(), t.pgrid, t.values) - psi).norm() <
        1e-10);
}

TEST_CASE("state vector validation") {
  auto b = osc(2);
  Vec bad(2);
  bad << 2.0, 0.0;
  CHECK_THROWS_AS(StateVector::make(b, bad), std::invalid_argument);
  Vec ok(2);
  ok << 1.0 + 2e-7, 0.0;
  const StateVector st = StateVector::make(b, ok);
  CHECK(st.c.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("histogram basis") {
  const BasisSet h = BasisSet::histogram(8, -4.0, 4.0);
  CHECK(h.size() == 8);
  // indicator value 1/sqrt(bin width)
  const double dx = 1.0;
  CHECK(std::abs(h.eval_coord(-3.5)[0] - 1.0 / std::sqrt(dx)) < 1e-14);
  CHECK(std::abs(h.eval_coord(-3.5)[1]) == 0.0);
  // momentum columns keep unit norm (discrete Parseval)
  for (int i = 0; i < 8; ++i) {
    double nrm = 0.0;
    for (int k = 0; k < h.momentum_grid().size(); ++k)
      nrm += h.momentum_quad_weights()[k] * std::norm(h.mom_values()(k, i));
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("histogram density helper normalizes to one") {
  RealVec samples(6);
  samples << -1.0, -0.5, 0.0, 0.2, 0.9, 3.0;  // last value out of range
  const GridFunction g = histogram_density(samples, -2.0, 2.0, 8);
  double mass = 0.0;
  for (int i = 0; i < g.values.size(); ++i) mass += g.values[i] * 0.5;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("basis descriptor round trip") {
  auto b = osc(7);
  const BasisSet back = BasisSet::from_descriptor(b->descriptor());
  CHECK(back.size() == 7);
  CHECK(back.grid_halfwidth() == doctest::Approx(b->grid_halfwidth()));
  CHECK(back.grid_points() == b->grid_points());

  const BasisSet h = BasisSet::histogram(4, -1.0, 3.0);
  const BasisSet hb = BasisSet::from_descriptor(h.descriptor());
  CHECK(hb.kind() == BasisKind::histogram);
  CHECK(hb.grid()[0] == doctest::Approx(h.grid()[0]));
}
