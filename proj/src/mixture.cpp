// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "qroot/rng.hpp"
#include "qroot/root_mle.hpp"

namespace qroot {

namespace {

// FNV-1a over the assignment vector, for exact-cycle detection.
std::uint64_t assignment_hash(const std::vector<int>& z) {
  std::uint64_t h = 1469598103934665603ull;
  for (int v : z) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

MixtureModel quasi_bayes_divide(const SampleSet& samples, int k,
                                std::shared_ptr<const BasisSet> basis,
                                const MixtureConfig& config) {
  if (k < 1) throw std::invalid_argument("quasi_bayes_divide: k must be >= 1");
  const int npts = samples.total();
  if (npts < 1) throw data_error("quasi_bayes_divide: empty sample set");

  MixtureModel model;
  model.assignment.assign(npts, 0);

  const auto sub_sample = [&](const std::vector<int>& z, int comp) {
    SampleSet sub;
    std::vector<double> xs, ps;
    for (int i = 0; i < samples.n(); ++i)
      if (z[i] == comp) xs.push_back(samples.coord[i]);
    for (int l = 0; l < samples.m(); ++l)
      if (z[samples.n() + l] == comp) ps.push_back(samples.mom[l]);
    sub.coord = Eigen::Map<const RealVec>(xs.data(), xs.size());
    sub.mom = Eigen::Map<const RealVec>(ps.data(), ps.size());
    return sub;
  };
  const auto solve_component = [&](const SampleSet& sub) {
    try {
      return solve_mle(sub, basis, config.solver).state;
    } catch (const convergence_error& e) {
      model.warning = "a component solve did not fully converge";
      return StateVector::make(basis, e.best().c);
    }
  };

  if (k == 1) {
    model.components.push_back(solve_component(samples));
    model.weights = RealVec::Ones(1);
    model.rounds = 1;
    model.converged = true;
    model.history.push_back(
        {model.weights, loglik_samples(samples, model.components[0])});
    return model;
  }
  if (npts < k * basis->size())
    model.warning = "fewer sample points than k * s; division may be unstable";

  Rng rng(config.seed);

  // Initial uniform random assignment.
  std::vector<int> z(npts);
  for (int i = 0; i < npts; ++i)
    z[i] = std::min(static_cast<int>(rng.uniform() * k), k - 1);

  // Per-point per-component densities, refreshed after each solve round.
  Eigen::MatrixXd comp_density(npts, k);
  const auto refresh_density = [&](int comp) {
    const StateVector& st = model.components[comp];
    for (int i = 0; i < samples.n(); ++i) {
      const Vec row = basis->eval_coord(samples.coord[i]);
      comp_density(i, comp) = std::norm((row.array() * st.c.array()).sum());
    }
    for (int l = 0; l < samples.m(); ++l) {
      const Vec row = basis->eval_mom(samples.mom[l]);
      comp_density(samples.n() + l, comp) =
          std::norm((row.array() * st.c.array()).sum());
    }
  };

  const auto counts_of = [&](const std::vector<int>& zz) {
    std::vector<int> c(k, 0);
    for (int v : zz) c[v]++;
    return c;
  };

  // Round 0: fit components on the random split.
  model.components.clear();
  for (int comp = 0; comp < k; ++comp) {
    SampleSet sub = sub_sample(z, comp);
    if (sub.total() == 0) {
      // Degenerate initial split; give the component the whole sample.
      sub = samples;
    }
    model.components.push_back(solve_component(sub));
  }
  model.weights = RealVec::Zero(k);
  {
    const auto c = counts_of(z);
    for (int comp = 0; comp < k; ++comp)
      model.weights[comp] = static_cast<double>(c[comp]) / npts;
  }
  for (int comp = 0; comp < k; ++comp) refresh_density(comp);

  std::vector<double> frozen_u;  // reused random vector when !fresh_randomness
  std::unordered_map<std::uint64_t, int> seen;
  model.converged = false;

  for (int round = 1; round <= config.max_rounds; ++round) {
    model.rounds = round;

    // (a) randomized posterior assignment
    if (config.fresh_randomness || frozen_u.empty()) {
      frozen_u.resize(npts);
      for (int i = 0; i < npts; ++i) frozen_u[i] = rng.uniform();
    }
    std::vector<int> znew(npts);
    for (int i = 0; i < npts; ++i) {
      double total = 0.0;
      for (int comp = 0; comp < k; ++comp)
        total += model.weights[comp] * comp_density(i, comp);
      if (total <= 0.0) {
        znew[i] = std::min(static_cast<int>(frozen_u[i] * k), k - 1);
        continue;
      }
      double acc = 0.0;
      znew[i] = k - 1;
      for (int comp = 0; comp < k; ++comp) {
        acc += model.weights[comp] * comp_density(i, comp) / total;
        if (frozen_u[i] < acc) {
          znew[i] = comp;
          break;
        }
      }
    }

    // Starvation policy: reseed an empty component from the 10% of points
    // with the lowest mixture likelihood.
    auto counts = counts_of(znew);
    for (int comp = 0; comp < k; ++comp) {
      if (counts[comp] > 0) continue;
      std::vector<std::pair<double, int>> scored(npts);
      for (int i = 0; i < npts; ++i) {
        double mix = 0.0;
        for (int q = 0; q < k; ++q)
          mix += model.weights[q] * comp_density(i, q);
        scored[i] = {mix, i};
      }
      std::sort(scored.begin(), scored.end());
      const int take = std::max(1, npts / 10);
      for (int t = 0; t < take; ++t) znew[scored[t].second] = comp;
      counts = counts_of(znew);
    }

    // (b) weight update, (c) per-component MLE
    z = znew;
    RealVec new_weights(k);
    for (int comp = 0; comp < k; ++comp)
      new_weights[comp] = static_cast<double>(counts[comp]) / npts;

    std::vector<StateVector> new_components;
    new_components.reserve(k);
    for (int comp = 0; comp < k; ++comp) {
      SolverConfig warm = config.solver;
      warm.init = model.components[comp].c;  // warm start from last round
      SampleSet sub = sub_sample(z, comp);
      try {
        new_components.push_back(solve_mle(sub, basis, warm).state);
      } catch (const convergence_error& e) {
        model.warning = "a component solve did not fully converge";
        new_components.push_back(StateVector::make(basis, e.best().c));
      }
    }

    double weight_change = (new_weights - model.weights).cwiseAbs().maxCoeff();
    double fid_change = 0.0;
    for (int comp = 0; comp < k; ++comp) {
      const double fid = std::norm(
          model.components[comp].c.dot(new_components[comp].c));
      fid_change = std::max(fid_change, 1.0 - fid);
    }
    model.components = std::move(new_components);
    model.weights = new_weights;
    for (int comp = 0; comp < k; ++comp) refresh_density(comp);

    double comp_ll = 0.0;
    for (int i = 0; i < npts; ++i)
      comp_ll += std::log(std::max(comp_density(i, z[i]), 1e-300));
    model.history.push_back({model.weights, comp_ll});

    if (weight_change < config.weight_tol && fid_change < config.fidelity_tol) {
      model.converged = true;
      break;
    }
    if (!config.fresh_randomness) {
      const auto h = assignment_hash(z);
      if (seen.count(h)) {  // equilibrium or a small stationary cycle
        model.converged = true;
        break;
      }
      seen[h] = round;
    }
  }
  model.assignment = z;
  if (!model.converged && model.warning.empty())
    model.warning = "no equilibrium within max_rounds; returning last model";
  return model;
}

InfoReport info_report(const MixtureModel& model, const BasisSet& basis) {
  const int k = static_cast<int>(model.components.size());
  if (k < 1) throw std::invalid_argument("info_report: empty model");
  const int ng = static_cast<int>(basis.grid().size());

  const auto xlnx = [](double p) { return p > 0.0 ? p * std::log(p) : 0.0; };

  Eigen::MatrixXd dens(ng, k);
  for (int comp = 0; comp < k; ++comp) {
    Vec psi = basis.coord_values() * model.components[comp].c;
    dens.col(comp) = psi.cwiseAbs2();
  }

  InfoReport r;
  for (int g = 0; g < ng; ++g) {
    const double w = basis.quad_weights()[g];
    double mix = 0.0;
    for (int comp = 0; comp < k; ++comp) {
      const double p = dens(g, comp);
      mix += model.weights[comp] * p;
      r.h_mix += w * model.weights[comp] * xlnx(p);
    }
    r.h0 += w * xlnx(mix);
  }
  r.i_mix = r.h_mix - r.h0;
  for (int comp = 0; comp < k; ++comp) {
    const double f = model.weights[comp];
    if (f > 0.0) r.s_sh -= f * std::log(f);
  }
  return r;
}

DensityMatrixM assemble_density(const std::vector<Vec>& components,
                                const RealVec& weights) {
  const int k = static_cast<int>(components.size());
  if (k < 1 || weights.size() != k)
    throw std::invalid_argument("assemble_density: bad component/weight lists");
  const auto dim = components[0].size();
  double wsum = 0.0;
  for (int i = 0; i < k; ++i) {
    if (components[i].size() != dim)
      throw std::invalid_argument("assemble_density: dimension mismatch");
    if (weights[i] < -1e-12)
      throw std::invalid_argument("assemble_density: negative weight");
    wsum += weights[i];
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("assemble_density: weights must sum to 1");

  DensityMatrixM d;
  d.components = components;
  d.weights = weights;
  d.rho = Mat::Zero(dim, dim);
  for (int i = 0; i < k; ++i) {
    const Vec c = components[i] / components[i].norm();
    d.rho += weights[i] * (c * c.adjoint());
  }
  d.rho = (d.rho + d.rho.adjoint()) / 2.0;
  return d;
}

double density_deviation(const Mat& rho_hat, const Mat& rho_true) {
  if (rho_hat.rows() != rho_true.rows() || rho_hat.cols() != rho_true.cols())
    throw std::invalid_argument("density_deviation: dimension mismatch");
  const Mat d = rho_hat - rho_true;
  return (d * d).trace().real();
}

PauliCoefficients pauli_decompose(const Eigen::Matrix2cd& l) {
  PauliCoefficients p;
  p.a0 = (l(0, 0) + l(1, 1)) / 2.0;
  p.a1 = (l(0, 1) + l(1, 0)) / 2.0;                       // Tr(sigma_x L)/2
  p.a2 = (cxd(0, 1) * (l(0, 1) - l(1, 0))) / 2.0;         // Tr(sigma_y L)/2
  p.a3 = (l(0, 0) - l(1, 1)) / 2.0;                       // Tr(sigma_z L)/2
  p.b1 = p.a0 + p.a3;
  p.b2 = p.a1 + cxd(0, 1) * p.a2;
  p.b3 = p.a1 - cxd(0, 1) * p.a2;
  p.b4 = p.a0 - p.a3;
  return p;
}

Eigen::Matrix2cd pauli_reconstruct(const PauliCoefficients& p) {
  Eigen::Matrix2cd l;
  l(0, 0) = p.a0 + p.a3;
  l(1, 1) = p.a0 - p.a3;
  l(0, 1) = p.a1 - cxd(0, 1) * p.a2;
  l(1, 0) = p.a1 + cxd(0, 1) * p.a2;
  return l;
}

std::pair<RealVec, RealVec> psi_row_density(const Eigen::Matrix2cd& l,
                                            const BasisSet& basis,
                                            const RealVec& points) {
  if (basis.size() < 2)
    throw std::invalid_argument("psi_row_density: basis needs s >= 2");
  RealVec px(points.size()), pp(points.size());
  for (int idx = 0; idx < points.size(); ++idx) {
    const Vec cvals = basis.eval_coord(points[idx]);
    const Vec mvals = basis.eval_mom(points[idx]);
    Eigen::RowVector2cd phix(cvals[0], cvals[1]);
    Eigen::RowVector2cd phip(mvals[0], mvals[1]);
    px[idx] = (phix * l).squaredNorm();
    pp[idx] = (phip * l).squaredNorm();
  }
  return {px, pp};
}

}  // namespace qroot
