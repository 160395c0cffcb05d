// Copyright (c) 2026 qroot developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qroot {

double chi_squared_cdf(double x, double dof);
double chi_squared_quantile(double p, double dof);

/// Chi-square style report. `statistic` is the half-form value
/// N(1 - |<a,b>|^2); `dof` counts the doubled convention 2(s-1) and the
/// p-value is the upper tail of 2*statistic against that chi-square law.
struct ChiSqReport {
  double statistic = 0.0;
  int dof = 0;
  double pvalue = 1.0;
  std::string convention_note;
};

ChiSqReport make_half_chisq_report(double statistic, int complex_dof);

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double pvalue = 1.0;
};

/// Pearson goodness-of-fit on `bins` equal-probability bins of the theoretical
/// law given by its quantile function.
GofResult equal_prob_gof(const std::vector<double>& samples,
                         const std::function<double(double)>& quantile,
                         int bins);

/// Kolmogorov-Smirnov sup distance between the sample ECDF and `cdf`.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

}  // namespace qroot
