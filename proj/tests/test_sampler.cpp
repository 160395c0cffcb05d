// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qroot/sampler.hpp"
#include "qroot/stats.hpp"

using namespace qroot;

namespace {

std::shared_ptr<const BasisSet> osc(int s) {
  return std::make_shared<const BasisSet>(BasisSet::oscillator(s));
}

StateVector ground(int s) {
  Vec c = Vec::Zero(s);
  c[0] = 1.0;
  return StateVector::make(osc(s), c);
}

}  // namespace

TEST_CASE("coordinate second moment of the ground state") {
  // <x^2> = 1/2 by the Simpson oracle
  const double ref = oracle::simpson(
      [](double x) {
        const double f = oracle::hermite_function(0, x);
        return x * x * f * f;
      },
      -9.0, 9.0);
  CHECK(ref == doctest::Approx(0.5).epsilon(1e-10));

  const SampleSet s = sample_complementary(ground(1), 100000, 0, 42);
  const double mean_x2 = s.coord.cwiseAbs2().mean();
  CHECK(std::abs(mean_x2 - 0.5) < 0.02);
}

TEST_CASE("empty and deterministic draws") {
  const SampleSet empty = sample_complementary(ground(2), 0, 0, 1);
  CHECK(empty.n() == 0);
  CHECK(empty.m() == 0);

  const SampleSet a = sample_complementary(ground(2), 50, 30, 777);
  const SampleSet b = sample_complementary(ground(2), 50, 30, 777);
  CHECK((a.coord - b.coord).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.mom - b.mom).cwiseAbs().maxCoeff() == 0.0);
  const SampleSet c = sample_complementary(ground(2), 50, 30, 778);
  CHECK((a.coord - c.coord).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("empirical CDF converges to the true CDF (KS at 99%)") {
  const int n = 10000;
  const SampleSet s = sample_complementary(ground(1), n, 0, 5);
  std::vector<double> xs(s.coord.data(), s.coord.data() + s.coord.size());
  // true CDF by Simpson oracle
  const auto cdf = [](double x) {
    return oracle::simpson(
        [](double t) {
          const double f = oracle::hermite_function(0, t);
          return f * f;
        },
        -9.0, x, 400);
  };
  const double ks = ks_statistic(xs, cdf);
  CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("spin sampling along special directions") {
  Vec up(2);
  up << 1.0, 0.0;
  const std::vector<std::pair<double, double>> zdir = {{0.0, 0.0}};
  const SpinCounts cz = sample_spin(up, zdir, 200, 9);
  CHECK(cz.plus()[0] == 200);
  CHECK(cz.minus()[0] == 0);

  const std::vector<std::pair<double, double>> xdir = {{kPi / 2.0, 0.0}};
  const SpinCounts cx = sample_spin(up, xdir, 100000, 10);
  // P+ = 1/2 exactly; binomial oracle sd = sqrt(n/4) = 158
  CHECK(std::abs(cx.plus()[0] / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("fig-5 sized spin experiment records N = 10000") {
  Vec c(2);
  c << cxd(0.8, 0.1), cxd(0.3, -0.45);
  c /= c.norm();
  Rng rng(123);
  const auto dirs = random_directions(200, rng);
  const SpinCounts counts = sample_spin(c, dirs, 50, 4);
  CHECK(counts.total() == 10000);
  CHECK(counts.directions.size() == 200);
  for (int d = 0; d < counts.counts.rows(); ++d)
    CHECK(counts.counts.row(d).sum() == 50);
}

TEST_CASE("register sampling") {
  RealVec degenerate(4);
  degenerate << 1.0, 0.0, 0.0, 0.0;
  const Eigen::VectorXi c0 = sample_register(degenerate, 7, 3);
  CHECK(c0[0] == 7);
  CHECK(c0.sum() == 7);

  RealVec uniform = RealVec::Constant(4, 0.25);
  const Eigen::VectorXi c1 = sample_register(uniform, 100000, 8);
  CHECK(c1.sum() == 100000);
  // multinomial oracle: sd = sqrt(n p (1-p)) ~ 137, bound is ~3.6 sd
  for (int i = 0; i < 4; ++i) CHECK(std::abs(c1[i] - 25000) < 500);

  const Eigen::VectorXi z = sample_register(uniform, 0, 1);
  CHECK(z.sum() == 0);

  RealVec bad(2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(sample_register(bad, 10, 1), std::invalid_argument);
  RealVec neg(2);
  neg << 1.5, -0.5;
  CHECK_THROWS_AS(sample_register(neg, 10, 1), std::invalid_argument);
}

TEST_CASE("random directions cover the sphere") {
  Rng rng(6);
  const auto dirs = random_directions(4000, rng);
  double mean_cos = 0.0;
  for (const auto& [th, ph] : dirs) mean_cos += std::cos(th);
  mean_cos /= dirs.size();
  CHECK(std::abs(mean_cos) < 0.05);  // E cos(theta) = 0, sd ~ 0.009
}
