// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#include "qroot/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace qroot {

double chi_squared_cdf(double x, double dof) {
  if (x <= 0.0) return 0.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(dist, x);
}

double chi_squared_quantile(double p, double dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(dist, p);
}

ChiSqReport make_half_chisq_report(double statistic, int complex_dof) {
  ChiSqReport r;
  r.statistic = statistic;
  r.dof = 2 * complex_dof;
  r.pvalue = 1.0 - chi_squared_cdf(2.0 * statistic, static_cast<double>(r.dof));
  r.convention_note =
      "statistic is the half form chi~^2_" + std::to_string(complex_dof) +
      "; p-value from 2*statistic against chi^2_" + std::to_string(r.dof);
  return r;
}

GofResult equal_prob_gof(const std::vector<double>& samples,
                         const std::function<double(double)>& quantile,
                         int bins) {
  if (bins < 2) throw std::invalid_argument("equal_prob_gof: bins < 2");
  if (samples.empty()) throw std::invalid_argument("equal_prob_gof: no samples");
  std::vector<double> edges(bins - 1);
  for (int i = 1; i < bins; ++i)
    edges[i - 1] = quantile(static_cast<double>(i) / bins);
  std::vector<int> counts(bins, 0);
  for (double v : samples) {
    int b = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) -
                             edges.begin());
    counts[b]++;
  }
  const double expected = static_cast<double>(samples.size()) / bins;
  GofResult g;
  for (int b = 0; b < bins; ++b)
    g.statistic += (counts[b] - expected) * (counts[b] - expected);
  g.statistic /= expected;
  g.dof = bins - 1;
  g.pvalue = 1.0 - chi_squared_cdf(g.statistic, static_cast<double>(g.dof));
  return g;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    sup = std::max(sup, std::abs((i + 1) / n - f));
    sup = std::max(sup, std::abs(f - i / n));
  }
  return sup;
}

}  // namespace qroot
