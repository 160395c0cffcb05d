// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace qroot {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw data_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& path, int lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw data_error(path + ":" + std::to_string(lineno) +
                     ": malformed number '" + s + "'");
  }
}

}  // namespace

void save_samples_csv(const std::string& path, const SampleSet& samples) {
  std::ostringstream out;
  out << "space,value\n";
  for (int i = 0; i < samples.n(); ++i)
    out << "x," << format_double(samples.coord[i]) << "\n";
  for (int l = 0; l < samples.m(); ++l)
    out << "p," << format_double(samples.mom[l]) << "\n";
  write_text_file(path, out.str());
}

SampleSet load_samples_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  int lineno = 0;
  std::vector<double> xs, ps;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (!header_seen) {
      if (f.size() != 2 || f[0] != "space" || f[1] != "value")
        throw data_error(path + ":" + std::to_string(lineno) +
                         ": expected header 'space,value'");
      header_seen = true;
      continue;
    }
    if (f.size() != 2)
      throw data_error(path + ":" + std::to_string(lineno) +
                       ": expected 2 columns");
    const double v = parse_double(f[1], path, lineno);
    if (f[0] == "x")
      xs.push_back(v);
    else if (f[0] == "p")
      ps.push_back(v);
    else
      throw data_error(path + ":" + std::to_string(lineno) +
                       ": space must be 'x' or 'p', got '" + f[0] + "'");
  }
  SampleSet s;
  s.coord = Eigen::Map<const RealVec>(xs.data(), xs.size());
  s.mom = Eigen::Map<const RealVec>(ps.data(), ps.size());
  return s;
}

void save_spin_counts_csv(const std::string& path, const SpinCounts& counts) {
  std::ostringstream out;
  out << "theta,phi,outcome,count\n";
  const double j = counts.j();
  for (std::size_t d = 0; d < counts.directions.size(); ++d) {
    for (int q = 0; q < counts.counts.cols(); ++q) {
      out << format_double(counts.directions[d].first) << ","
          << format_double(counts.directions[d].second) << ","
          << format_double(j - q) << "," << counts.counts(d, q) << "\n";
    }
  }
  write_text_file(path, out.str());
}

SpinCounts load_spin_counts_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  struct Row {
    double theta, phi, m;
    long count;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (!header_seen) {
      if (f.size() != 4 || f[0] != "theta" || f[1] != "phi" ||
          f[2] != "outcome" || f[3] != "count")
        throw data_error(path + ":" + std::to_string(lineno) +
                         ": expected header 'theta,phi,outcome,count'");
      header_seen = true;
      continue;
    }
    if (f.size() != 4)
      throw data_error(path + ":" + std::to_string(lineno) +
                       ": expected 4 columns");
    Row r;
    r.theta = parse_double(f[0], path, lineno);
    r.phi = parse_double(f[1], path, lineno);
    r.m = parse_double(f[2], path, lineno);
    r.count = static_cast<long>(parse_double(f[3], path, lineno));
    if (r.count < 0)
      throw data_error(path + ":" + std::to_string(lineno) + ": negative count");
    rows.push_back(r);
  }
  if (rows.empty()) throw data_error(path + ": no spin count rows");

  // Determine j from the largest |m| seen; group rows by direction in order
  // of first appearance.
  double jmax = 0.0;
  for (const Row& r : rows) jmax = std::max(jmax, std::abs(r.m));
  const int dim = static_cast<int>(std::lround(2.0 * jmax)) + 1;

  SpinCounts out;
  std::vector<std::pair<double, double>> dirs;
  std::vector<Eigen::VectorXi> cnt;
  for (const Row& r : rows) {
    int idx = -1;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      if (dirs[d].first == r.theta && dirs[d].second == r.phi) {
        idx = static_cast<int>(d);
        break;
      }
    }
    if (idx < 0) {
      dirs.push_back({r.theta, r.phi});
      cnt.push_back(Eigen::VectorXi::Zero(dim));
      idx = static_cast<int>(dirs.size()) - 1;
    }
    const int q = static_cast<int>(std::lround(jmax - r.m));
    if (q < 0 || q >= dim)
      throw data_error(path + ": outcome " + format_double(r.m) +
                       " outside the spin-" + format_double(jmax) + " ladder");
    cnt[idx][q] += static_cast<int>(r.count);
  }
  out.directions = dirs;
  out.counts.resize(static_cast<int>(dirs.size()), dim);
  for (std::size_t d = 0; d < dirs.size(); ++d)
    out.counts.row(static_cast<int>(d)) = cnt[d].transpose();
  return out;
}

json state_to_json(const Vec& c) {
  json arr = json::array();
  for (int i = 0; i < c.size(); ++i)
    arr.push_back({c[i].real(), c[i].imag()});
  return json{{"c", arr}};
}

Vec state_from_json(const json& j) {
  const json& arr = j.contains("c") ? j.at("c") : j;
  if (!arr.is_array()) throw data_error("state json: expected an array of [re, im]");
  Vec c(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2)
      throw data_error("state json: entry " + std::to_string(i) +
                       " is not [re, im]");
    c[static_cast<int>(i)] = cxd(e[0].get<double>(), e[1].get<double>());
  }
  return c;
}

json chisq_to_json(const ChiSqReport& r) {
  return json{{"statistic", r.statistic},
              {"dof", r.dof},
              {"pvalue", r.pvalue},
              {"convention_note", r.convention_note}};
}

namespace {

json estimate_common(const Vec& c, int iterations, double residual,
                     double loglik, bool converged, const std::string& warning) {
  json j = state_to_json(c);
  j["iterations"] = iterations;
  j["residual"] = residual;
  j["loglik"] = loglik;
  j["converged"] = converged;
  if (!warning.empty()) j["warning"] = warning;
  return j;
}

}  // namespace

json estimate_to_json(const EstimateResult& r) {
  return estimate_common(r.state.c, r.iterations, r.residual, r.loglik,
                         r.converged, r.warning);
}

json estimate_to_json(const VectorEstimate& r) {
  return estimate_common(r.c, r.iterations, r.residual, r.loglik, r.converged,
                         r.warning);
}

json constrained_to_json(const ConstrainedEstimate& r) {
  json j = estimate_common(r.state.c, r.iterations, r.residual, r.loglik,
                           r.converged, r.warning);
  j["lambda1"] = r.lambda1;
  j["lambda2"] = r.lambda2;
  j["e_bar"] = r.e_bar;
  return j;
}

json mixture_to_json(const MixtureModel& m) {
  json comps = json::array();
  for (const auto& comp : m.components) comps.push_back(state_to_json(comp.c));
  json weights = json::array();
  for (int i = 0; i < m.weights.size(); ++i) weights.push_back(m.weights[i]);
  json j{{"weights", weights},
         {"components", comps},
         {"assignment", m.assignment},
         {"rounds", m.rounds},
         {"converged", m.converged}};
  if (!m.warning.empty()) j["warning"] = m.warning;
  return j;
}

json spinor_to_json(const Spinor& s) {
  json j = state_to_json(s.c);
  j["j"] = s.j;
  return j;
}

Spinor spinor_from_json(const json& j) {
  const double spin = j.at("j").get<double>();
  return Spinor::make(spin, state_from_json(j));
}

}  // namespace qroot
