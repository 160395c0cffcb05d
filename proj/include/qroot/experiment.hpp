// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qroot/basis.hpp"
#include "qroot/common.hpp"
#include "qroot/energy_mle.hpp"
#include "qroot/fixed_point.hpp"
#include "qroot/mixture.hpp"
#include "qroot/spin.hpp"

namespace qroot {

enum class Scenario {
  complementary,
  constrained,
  spin,
  mixture,
  phase_retrieval,
  dynamics
};

Scenario scenario_from_string(const std::string& s);
std::string to_string(Scenario s);

/// Config-driven replicate sweep. Replicate r uses seed `seed + r`; the
/// output tree is a pure function of (config, seed).
struct ExperimentConfig {
  Scenario scenario = Scenario::complementary;
  std::uint64_t seed = 0;
  int replicates = 1;
  nlohmann::json* raw = nullptr;  // original document, echoed into the output

  Vec true_state;                   // coordinate scenarios
  std::optional<double> spin_j;     // spin scenario
  std::optional<nlohmann::json> basis_descriptor;
  std::optional<nlohmann::json> fit_basis_descriptor;
  int n = 0, m = 0;                 // complementary sample sizes
  int directions = 0, shots = 0;    // spin sample sizes
  SolverConfig solver;
  std::optional<double> e_bar;      // constrained: fixed target (else from data)
  int mixture_k = 2;
  bool mixture_fresh_randomness = true;
  int pr_bins = 64;
  int pr_max_iter = 400;
  int dynamics_s = 20;
  std::string output_dir = "qroot-out";

  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentReport {
  int replicates = 0;
  int failures = 0;
  double mean_statistic = 0.0;
  std::string output_dir;
};

/// Runs the configured sweep and writes per-replicate JSON, an aggregate CSV
/// and density-comparison CSVs under output_dir. Solver failures are recorded
/// per replicate and the sweep continues.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Replicate kernels shared by run_experiment and the acceptance suite.

struct ComplementaryReplicates {
  std::vector<double> statistic;   // (n+m)(1 - |<est, truth>|^2)
  std::vector<double> fidelity;
  std::vector<int> iterations;
  std::vector<Vec> estimates;
  int failures = 0;
};

ComplementaryReplicates complementary_replicates(
    const Vec& true_c, std::shared_ptr<const BasisSet> basis,
    std::shared_ptr<const BasisSet> fit_basis, int n, int m, int replicates,
    std::uint64_t seed, const SolverConfig& solver);

struct ConstrainedReplicates {
  std::vector<double> infidelity_unconstrained;
  std::vector<double> infidelity_constrained;
  std::vector<double> lambda1, lambda2, e_bar;
  std::vector<Vec> estimates_unconstrained, estimates_constrained;
  int failures = 0;
};

/// Truth lives in `basis` (s_true), the fit runs in `fit_basis`; e_bar_fixed
/// overrides the per-replicate data estimate.
ConstrainedReplicates constrained_replicates(
    const Vec& true_c, std::shared_ptr<const BasisSet> basis,
    std::shared_ptr<const BasisSet> fit_basis, int n, int m, int replicates,
    std::uint64_t seed, const SolverConfig& solver,
    std::optional<double> e_bar_fixed);

struct SpinReplicates {
  std::vector<double> statistic;  // N (1 - |<est, truth>|^2)
  std::vector<double> fidelity;
  std::vector<int> iterations;
  int failures = 0;
};

SpinReplicates spin_replicates(const Vec& true_spinor, int directions, int shots,
                               int replicates, std::uint64_t seed,
                               const SolverConfig& solver);

}  // namespace qroot
