// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "qroot/energy_mle.hpp"
#include "qroot/mixture.hpp"
#include "qroot/root_mle.hpp"
#include "qroot/sampler.hpp"
#include "qroot/spin.hpp"
#include "qroot/stats.hpp"

namespace qroot {

/// Float formatting used in every artifact: shortest round-trip (%.17g).
std::string format_double(double v);

// SampleSet CSV: header `space,value`, rows `x,<float>` / `p,<float>`.
void save_samples_csv(const std::string& path, const SampleSet& samples);
SampleSet load_samples_csv(const std::string& path);

// SpinCounts CSV: header `theta,phi,outcome,count`, outcome is the projection
// m as a decimal (0.5, -0.5, 1, 0, ...).
void save_spin_counts_csv(const std::string& path, const SpinCounts& counts);
SpinCounts load_spin_counts_csv(const std::string& path);

nlohmann::json state_to_json(const Vec& c);
Vec state_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const EstimateResult& r);
nlohmann::json estimate_to_json(const VectorEstimate& r);
nlohmann::json chisq_to_json(const ChiSqReport& r);
nlohmann::json constrained_to_json(const ConstrainedEstimate& r);
nlohmann::json mixture_to_json(const MixtureModel& m);
nlohmann::json spinor_to_json(const Spinor& s);
Spinor spinor_from_json(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace qroot
