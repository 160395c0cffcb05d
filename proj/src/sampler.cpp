// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "qroot/spin.hpp"

namespace qroot {

RealVec sample_from_density(const RealVec& grid, const RealVec& density, int n,
                            Rng& rng) {
  const int ng = static_cast<int>(grid.size());
  if (ng < 2 || density.size() != ng)
    throw std::invalid_argument("sample_from_density: bad grid/density");
  // Trapezoid cumulative, normalized.
  RealVec cdf(ng);
  cdf[0] = 0.0;
  for (int i = 1; i < ng; ++i) {
    const double seg =
        0.5 * (std::max(density[i], 0.0) + std::max(density[i - 1], 0.0)) *
        (grid[i] - grid[i - 1]);
    cdf[i] = cdf[i - 1] + seg;
  }
  const double total = cdf[ng - 1];
  if (total <= 0.0) throw data_error("sample_from_density: zero density mass");
  cdf /= total;

  RealVec out(n);
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    // first index with cdf[idx] > u, then interpolate inside [idx-1, idx]
    const double* begin = cdf.data();
    const double* pos = std::upper_bound(begin, begin + ng, u);
    int idx = static_cast<int>(pos - begin);
    idx = std::clamp(idx, 1, ng - 1);
    const double f0 = cdf[idx - 1], f1 = cdf[idx];
    const double t = f1 > f0 ? (u - f0) / (f1 - f0) : 0.0;
    out[k] = grid[idx - 1] + t * (grid[idx] - grid[idx - 1]);
  }
  return out;
}

SampleSet sample_complementary(const StateVector& state, int n, int m,
                               std::uint64_t seed) {
  if (n < 0 || m < 0) throw std::invalid_argument("sample_complementary: n, m >= 0");
  Rng rng(seed);
  SampleSet s;
  s.meta.seed = seed;
  s.meta.true_state = state.c;
  if (n > 0) {
    const RealVec d = density_on_grid(state, Space::coordinate);
    s.coord = sample_from_density(state.basis->grid(), d, n, rng);
  }
  if (m > 0) {
    const RealVec d = density_on_grid(state, Space::momentum);
    s.mom = sample_from_density(state.basis->momentum_grid(), d, m, rng);
  }
  return s;
}

namespace {

// One multinomial draw by inversion of the cumulative outcome probabilities.
int draw_outcome(const RealVec& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (int q = 0; q < probs.size(); ++q) {
    acc += probs[q];
    if (u < acc) return q;
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

SpinCounts sample_spin(const Vec& spinor,
                       const std::vector<std::pair<double, double>>& directions,
                       int shots_per_direction, std::uint64_t seed) {
  const int dim = static_cast<int>(spinor.size());
  if (dim < 2) throw std::invalid_argument("sample_spin: spinor dimension < 2");
  if (std::abs(spinor.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("sample_spin: spinor not normalized");
  const double j = (dim - 1) / 2.0;

  Rng rng(seed);
  SpinCounts out;
  out.directions = directions;
  out.counts = Eigen::MatrixXi::Zero(static_cast<int>(directions.size()), dim);
  for (std::size_t d = 0; d < directions.size(); ++d) {
    const auto [theta, phi] = directions[d];
    RealVec probs(dim);
    if (dim == 2) {
      auto [pp, pm] = spin_half_probs(spinor, theta, phi);
      probs[0] = pp;
      probs[1] = pm;
    } else {
      const Vec rotated = rotated_spinor(spinor, j, theta, phi);
      probs = rotated.cwiseAbs2();
    }
    for (int shot = 0; shot < shots_per_direction; ++shot)
      out.counts(static_cast<int>(d), draw_outcome(probs, rng))++;
  }
  return out;
}

Eigen::VectorXi sample_register(const RealVec& probabilities, int n,
                                std::uint64_t seed) {
  const int dim = static_cast<int>(probabilities.size());
  if (dim < 1) throw std::invalid_argument("sample_register: empty probabilities");
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    if (probabilities[i] < 0.0)
      throw std::invalid_argument("sample_register: negative probability");
    total += probabilities[i];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("sample_register: probabilities must sum to 1");

  Rng rng(seed);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(dim);
  for (int k = 0; k < n; ++k) counts[draw_outcome(probabilities, rng)]++;
  return counts;
}

std::vector<std::pair<double, double>> random_directions(int count, Rng& rng) {
  std::vector<std::pair<double, double>> dirs(count);
  for (int i = 0; i < count; ++i) {
    const double c = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    dirs[i] = {std::acos(c), phi};
  }
  return dirs;
}

}  // namespace qroot
