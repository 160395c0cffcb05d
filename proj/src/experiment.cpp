// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "qroot/dynamics.hpp"
#include "qroot/io.hpp"
#include "qroot/root_mle.hpp"
#include "qroot/sampler.hpp"
#include "qroot/stats.hpp"

namespace qroot {

using nlohmann::json;
namespace fs = std::filesystem;

Scenario scenario_from_string(const std::string& s) {
  if (s == "complementary") return Scenario::complementary;
  if (s == "constrained") return Scenario::constrained;
  if (s == "spin") return Scenario::spin;
  if (s == "mixture") return Scenario::mixture;
  if (s == "phase_retrieval") return Scenario::phase_retrieval;
  if (s == "dynamics") return Scenario::dynamics;
  throw data_error("unknown scenario '" + s + "'");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::complementary: return "complementary";
    case Scenario::constrained: return "constrained";
    case Scenario::spin: return "spin";
    case Scenario::mixture: return "mixture";
    case Scenario::phase_retrieval: return "phase_retrieval";
    case Scenario::dynamics: return "dynamics";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
  c.seed = j.value("seed", 0ull);
  c.replicates = j.value("replicates", 1);
  if (c.replicates < 1) throw data_error("experiment config: replicates < 1");

  if (j.contains("true_state")) {
    c.true_state = state_from_json(j.at("true_state"));
    if (j.at("true_state").contains("j"))
      c.spin_j = j.at("true_state").at("j").get<double>();
  }
  if (j.contains("basis")) c.basis_descriptor = j.at("basis");
  if (j.contains("fit_basis")) c.fit_basis_descriptor = j.at("fit_basis");
  if (j.contains("samples")) {
    const json& s = j.at("samples");
    c.n = s.value("n", 0);
    c.m = s.value("m", 0);
    c.directions = s.value("directions", 0);
    c.shots = s.value("shots", 0);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    c.solver.tol = s.value("tol", c.solver.tol);
    c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
    c.solver.gamma = s.value("gamma", c.solver.gamma);
  }
  if (j.contains("constraint")) {
    const json& s = j.at("constraint");
    if (s.contains("e_bar") && s.at("e_bar").is_number())
      c.e_bar = s.at("e_bar").get<double>();
  }
  if (j.contains("mixture")) {
    c.mixture_k = j.at("mixture").value("k", 2);
    c.mixture_fresh_randomness =
        j.at("mixture").value("fresh_randomness", true);
  }
  if (j.contains("phase_retrieval")) {
    c.pr_bins = j.at("phase_retrieval").value("bins", 64);
    c.pr_max_iter = j.at("phase_retrieval").value("max_iter", 400);
  }
  if (j.contains("dynamics")) c.dynamics_s = j.at("dynamics").value("s", 20);
  c.output_dir = j.value("output_dir", std::string("qroot-out"));
  return c;
}

namespace {

std::shared_ptr<const BasisSet> make_basis(
    const std::optional<json>& descriptor, int fallback_s) {
  if (descriptor)
    return std::make_shared<const BasisSet>(BasisSet::from_descriptor(*descriptor));
  return std::make_shared<const BasisSet>(BasisSet::oscillator(fallback_s));
}

Vec pad_to(const Vec& c, int s) {
  Vec out = Vec::Zero(s);
  out.head(c.size()) = c;
  return out;
}

std::string replicate_name(int r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "replicate_%04d.json", r);
  return buf;
}

void write_density_comparison(const std::string& path, const RealVec& grid,
                              const RealVec& true_density,
                              const RealVec& est_density) {
  std::ostringstream out;
  out << "point,true_density,estimated_density\n";
  for (int i = 0; i < grid.size(); ++i)
    out << format_double(grid[i]) << "," << format_double(true_density[i])
        << "," << format_double(est_density[i]) << "\n";
  write_text_file(path, out.str());
}

}  // namespace

ComplementaryReplicates complementary_replicates(
    const Vec& true_c, std::shared_ptr<const BasisSet> basis,
    std::shared_ptr<const BasisSet> fit_basis, int n, int m, int replicates,
    std::uint64_t seed, const SolverConfig& solver) {
  const StateVector truth = StateVector::make(basis, true_c);
  const Vec truth_padded = pad_to(true_c, fit_basis->size());
  ComplementaryReplicates out;
  for (int r = 0; r < replicates; ++r) {
    const SampleSet samples =
        sample_complementary(truth, n, m, seed + static_cast<std::uint64_t>(r));
    try {
      const EstimateResult est = solve_mle(samples, fit_basis, solver);
      const double fid = std::norm(truth_padded.dot(est.state.c));
      out.fidelity.push_back(fid);
      out.statistic.push_back((n + m) * (1.0 - fid));
      out.iterations.push_back(est.iterations);
      out.estimates.push_back(est.state.c);
    } catch (const convergence_error&) {
      out.failures++;
      out.fidelity.push_back(std::nan(""));
      out.statistic.push_back(std::nan(""));
      out.iterations.push_back(-1);
      out.estimates.push_back(Vec());
    }
  }
  return out;
}

ConstrainedReplicates constrained_replicates(
    const Vec& true_c, std::shared_ptr<const BasisSet> basis,
    std::shared_ptr<const BasisSet> fit_basis, int n, int m, int replicates,
    std::uint64_t seed, const SolverConfig& solver,
    std::optional<double> e_bar_fixed) {
  const StateVector truth = StateVector::make(basis, true_c);
  const Vec truth_padded = pad_to(true_c, fit_basis->size());
  const Potential pot = harmonic_potential();
  ConstrainedReplicates out;
  for (int r = 0; r < replicates; ++r) {
    const SampleSet samples =
        sample_complementary(truth, n, m, seed + static_cast<std::uint64_t>(r));
    try {
      const EstimateResult unc = solve_mle(samples, fit_basis, solver);
      const double e_bar =
          e_bar_fixed ? *e_bar_fixed : estimate_mean_energy(samples, pot.u);
      ConstrainedConfig cc;
      cc.inner = solver;
      const ConstrainedEstimate con =
          solve_constrained(samples, fit_basis, e_bar, cc);
      out.infidelity_unconstrained.push_back(
          1.0 - std::norm(truth_padded.dot(unc.state.c)));
      out.infidelity_constrained.push_back(
          1.0 - std::norm(truth_padded.dot(con.state.c)));
      out.lambda1.push_back(con.lambda1);
      out.lambda2.push_back(con.lambda2);
      out.e_bar.push_back(con.e_bar);
      out.estimates_unconstrained.push_back(unc.state.c);
      out.estimates_constrained.push_back(con.state.c);
    } catch (const convergence_error&) {
      out.failures++;
    } catch (const infeasible_error&) {
      out.failures++;
    }
  }
  return out;
}

SpinReplicates spin_replicates(const Vec& true_spinor, int directions, int shots,
                               int replicates, std::uint64_t seed,
                               const SolverConfig& solver) {
  SpinReplicates out;
  const double j = (true_spinor.size() - 1) / 2.0;
  for (int r = 0; r < replicates; ++r) {
    const std::uint64_t rep_seed = seed + static_cast<std::uint64_t>(r);
    Rng dir_rng(rep_seed ^ 0x5d1f00d5ull);
    const auto dirs = random_directions(directions, dir_rng);
    const SpinCounts counts = sample_spin(true_spinor, dirs, shots, rep_seed);
    try {
      const SpinEstimate est = counts.counts.cols() == 2
                                   ? solve_spin_half(counts, solver)
                                   : solve_spin_general(counts, j, solver);
      const double fid = std::norm(true_spinor.dot(est.state.c));
      out.fidelity.push_back(fid);
      out.statistic.push_back(static_cast<double>(counts.total()) * (1.0 - fid));
      out.iterations.push_back(est.iterations);
    } catch (const convergence_error&) {
      out.failures++;
      out.fidelity.push_back(std::nan(""));
      out.statistic.push_back(std::nan(""));
      out.iterations.push_back(-1);
    }
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  fs::create_directories(config.output_dir);
  const auto outpath = [&](const std::string& name) {
    return (fs::path(config.output_dir) / name).string();
  };

  ExperimentReport report;
  report.replicates = config.replicates;
  report.output_dir = config.output_dir;

  json summary;
  summary["scenario"] = to_string(config.scenario);
  summary["seed"] = config.seed;
  summary["replicates"] = config.replicates;

  std::ostringstream agg;

  switch (config.scenario) {
    case Scenario::complementary: {
      auto basis =
          make_basis(config.basis_descriptor, static_cast<int>(config.true_state.size()));
      auto fit_basis = config.fit_basis_descriptor
                           ? make_basis(config.fit_basis_descriptor, 0)
                           : basis;
      const auto reps = complementary_replicates(
          config.true_state, basis, fit_basis, config.n, config.m,
          config.replicates, config.seed, config.solver);
      report.failures = reps.failures;

      agg << "replicate,statistic,fidelity,iterations\n";
      double mean = 0.0;
      int ok = 0;
      for (int r = 0; r < config.replicates; ++r) {
        agg << r << "," << format_double(reps.statistic[r]) << ","
            << format_double(reps.fidelity[r]) << "," << reps.iterations[r]
            << "\n";
        if (reps.iterations[r] >= 0) {
          json jr;
          jr["replicate"] = r;
          jr["statistic"] = reps.statistic[r];
          jr["fidelity"] = reps.fidelity[r];
          jr["iterations"] = reps.iterations[r];
          jr["estimate"] = state_to_json(reps.estimates[r]);
          write_json_file(outpath(replicate_name(r)), jr);
          mean += reps.statistic[r];
          ++ok;
        }
      }
      if (ok > 0) report.mean_statistic = mean / ok;

      // Fig 3 style density comparison from the first successful replicate.
      for (int r = 0; r < config.replicates; ++r) {
        if (reps.iterations[r] < 0) continue;
        const StateVector truth = StateVector::make(
            fit_basis, pad_to(config.true_state, fit_basis->size()));
        const StateVector est = StateVector::make(fit_basis, reps.estimates[r]);
        write_density_comparison(outpath("density_coordinate.csv"),
                                 fit_basis->grid(),
                                 density_on_grid(truth, Space::coordinate),
                                 density_on_grid(est, Space::coordinate));
        write_density_comparison(outpath("density_momentum.csv"),
                                 fit_basis->momentum_grid(),
                                 density_on_grid(truth, Space::momentum),
                                 density_on_grid(est, Space::momentum));
        break;
      }
      break;
    }

    case Scenario::constrained: {
      auto basis =
          make_basis(config.basis_descriptor, static_cast<int>(config.true_state.size()));
      auto fit_basis = config.fit_basis_descriptor
                           ? make_basis(config.fit_basis_descriptor, 0)
                           : basis;
      const auto reps = constrained_replicates(
          config.true_state, basis, fit_basis, config.n, config.m,
          config.replicates, config.seed, config.solver, config.e_bar);
      report.failures = reps.failures;

      agg << "replicate,infidelity_unconstrained,infidelity_constrained,"
             "lambda1,lambda2,e_bar\n";
      const int ok = static_cast<int>(reps.infidelity_constrained.size());
      double mean = 0.0;
      for (int r = 0; r < ok; ++r) {
        agg << r << "," << format_double(reps.infidelity_unconstrained[r])
            << "," << format_double(reps.infidelity_constrained[r]) << ","
            << format_double(reps.lambda1[r]) << ","
            << format_double(reps.lambda2[r]) << ","
            << format_double(reps.e_bar[r]) << "\n";
        json jr;
        jr["replicate"] = r;
        jr["infidelity_unconstrained"] = reps.infidelity_unconstrained[r];
        jr["infidelity_constrained"] = reps.infidelity_constrained[r];
        jr["lambda1"] = reps.lambda1[r];
        jr["lambda2"] = reps.lambda2[r];
        jr["e_bar"] = reps.e_bar[r];
        write_json_file(outpath(replicate_name(r)), jr);
        mean += reps.infidelity_constrained[r];
      }
      if (ok > 0) report.mean_statistic = mean / ok;

      if (ok > 0) {
        // Fig 4 style momentum-density comparison from the first replicate.
        const StateVector truth = StateVector::make(
            fit_basis, pad_to(config.true_state, fit_basis->size()));
        const StateVector unc =
            StateVector::make(fit_basis, reps.estimates_unconstrained[0]);
        const StateVector con =
            StateVector::make(fit_basis, reps.estimates_constrained[0]);
        write_density_comparison(outpath("density_momentum_unconstrained.csv"),
                                 fit_basis->momentum_grid(),
                                 density_on_grid(truth, Space::momentum),
                                 density_on_grid(unc, Space::momentum));
        write_density_comparison(outpath("density_momentum_constrained.csv"),
                                 fit_basis->momentum_grid(),
                                 density_on_grid(truth, Space::momentum),
                                 density_on_grid(con, Space::momentum));
      }
      break;
    }

    case Scenario::spin: {
      const auto reps =
          spin_replicates(config.true_state, config.directions, config.shots,
                          config.replicates, config.seed, config.solver);
      report.failures = reps.failures;
      agg << "replicate,statistic,fidelity,iterations\n";
      double mean = 0.0;
      int ok = 0;
      for (int r = 0; r < config.replicates; ++r) {
        agg << r << "," << format_double(reps.statistic[r]) << ","
            << format_double(reps.fidelity[r]) << "," << reps.iterations[r]
            << "\n";
        if (reps.iterations[r] >= 0) {
          mean += reps.statistic[r];
          ++ok;
        }
      }
      if (ok > 0) report.mean_statistic = mean / ok;
      summary["mean_statistic"] = report.mean_statistic;
      break;
    }

    case Scenario::mixture: {
      auto basis =
          make_basis(config.basis_descriptor, static_cast<int>(config.true_state.size()));
      agg << "replicate,round_count,converged";
      for (int comp = 0; comp < config.mixture_k; ++comp) agg << ",weight" << comp;
      agg << ",i_mix,s_sh\n";
      const StateVector truth = StateVector::make(basis, config.true_state);
      for (int r = 0; r < config.replicates; ++r) {
        const SampleSet samples = sample_complementary(
            truth, config.n, config.m, config.seed + static_cast<std::uint64_t>(r));
        MixtureConfig mc;
        mc.seed = config.seed + static_cast<std::uint64_t>(r);
        mc.fresh_randomness = config.mixture_fresh_randomness;
        mc.solver = config.solver;
        const MixtureModel model =
            quasi_bayes_divide(samples, config.mixture_k, basis, mc);
        const InfoReport info = info_report(model, *basis);
        agg << r << "," << model.rounds << "," << (model.converged ? 1 : 0);
        for (int comp = 0; comp < config.mixture_k; ++comp)
          agg << "," << format_double(model.weights[comp]);
        agg << "," << format_double(info.i_mix) << ","
            << format_double(info.s_sh) << "\n";
        write_json_file(outpath(replicate_name(r)), mixture_to_json(model));
      }
      break;
    }

    case Scenario::phase_retrieval: {
      auto basis =
          make_basis(config.basis_descriptor, static_cast<int>(config.true_state.size()));
      const StateVector truth = StateVector::make(basis, config.true_state);
      agg << "replicate,final_error,iterations,sup_mismatch\n";
      for (int r = 0; r < config.replicates; ++r) {
        const SampleSet samples = sample_complementary(
            truth, config.n, config.m, config.seed + static_cast<std::uint64_t>(r));
        // Self-dual grid: dx = sqrt(2 pi / bins) makes the conjugate grid
        // coincide with the bin-center grid (centers at (i - bins/2) dx).
        const int bins = config.pr_bins;
        const double dx = std::sqrt(2.0 * kPi / bins);
        const double lo = -(bins / 2.0 + 0.5) * dx;
        GridFunction hx = histogram_density(samples.coord, lo, lo + bins * dx, bins);
        GridFunction hp = histogram_density(samples.mom, lo, lo + bins * dx, bins);
        hp.points = hx.points;  // bitwise-identical center coordinates
        const PhaseRetrievalResult pr =
            phase_retrieval(hx, hp, config.pr_max_iter);

        const Vec psi_true = evaluate_psi(truth, Space::coordinate, pr.grid);
        // best global phase, then sup distance
        const cxd z = psi_true.dot(pr.psi);
        const cxd rot = std::abs(z) > 0 ? std::conj(z) / std::abs(z) : cxd(1, 0);
        const double sup = (pr.psi * rot - psi_true).cwiseAbs().maxCoeff();

        agg << r << "," << format_double(pr.error_trace.back()) << ","
            << pr.iterations << "," << format_double(sup) << "\n";

        if (r == 0) {
          std::ostringstream psi_csv;
          psi_csv << "x,re,im,abs,true_re,true_im\n";
          for (int i = 0; i < pr.grid.size(); ++i) {
            const cxd v = pr.psi[i] * rot;
            psi_csv << format_double(pr.grid[i]) << "," << format_double(v.real())
                    << "," << format_double(v.imag()) << ","
                    << format_double(std::abs(v)) << ","
                    << format_double(psi_true[i].real()) << ","
                    << format_double(psi_true[i].imag()) << "\n";
          }
          write_text_file(outpath("retrieved_psi.csv"), psi_csv.str());
          std::ostringstream err_csv;
          err_csv << "iteration,error\n";
          for (std::size_t i = 0; i < pr.error_trace.size(); ++i)
            err_csv << i << "," << format_double(pr.error_trace[i]) << "\n";
          write_text_file(outpath("error_trace.csv"), err_csv.str());
        }
      }
      break;
    }

    case Scenario::dynamics: {
      const int s = config.dynamics_s;
      const Potential pot = harmonic_potential();
      const BasisSet osc = BasisSet::oscillator(s);
      const MatrixElements osc_elems = build_matrix_elements(osc, pot);
      const double osc_res = ehrenfest_residual(osc_elems);

      const BasisSet hist = BasisSet::histogram(s, -6.0, 6.0);
      const MatrixElements hist_elems = build_matrix_elements(hist, pot);
      const double hist_res = ehrenfest_residual(hist_elems);

      json jr;
      jr["s"] = s;
      jr["potential_name"] = pot.name;
      jr["residual"] = osc_res;
      jr["excluded_band"] = 1;
      jr["negative_control_residual"] = hist_res;
      write_json_file(outpath("dynamics_report.json"), jr);
      summary["residual"] = osc_res;
      summary["negative_control_residual"] = hist_res;
      agg << "basis,residual\n";
      agg << "oscillator," << format_double(osc_res) << "\n";
      agg << "histogram," << format_double(hist_res) << "\n";
      break;
    }
  }

  write_text_file(outpath("aggregate.csv"), agg.str());
  summary["failures"] = report.failures;
  summary["mean_statistic"] = report.mean_statistic;
  write_json_file(outpath("summary.json"), summary);
  return report;
}

}  // namespace qroot
