// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace interp::stats {

// Compensated (Kahan) sum.
double kahan_sum(const std::vector<double>& v);

double trapezoid(const std::vector<double>& f, double dx);

// CDF of a density sampled on a uniform grid, built from the trapezoid
// cumulative. The density is linear within each cell, so the CDF is
// piecewise quadratic; quantile() inverts it exactly (per-cell quadratic).
class DensityCdf {
 public:
  DensityCdf(std::vector<double> x, std::vector<double> rho);

  double cdf(double x) const;
  double quantile(double u) const;  // u in [0, 1]
  double total_mass() const { return total_; }

 private:
  std::vector<double> x_, rho_, cum_;
  double total_ = 0.0;
};

// Two-sided KS distance between a sample and a reference CDF.
double ks_statistic(std::vector<double> samples, const DensityCdf& ref);

// Asymptotic critical value at alpha = 0.01.
double ks_critical_alpha01(std::size_t n);

// Asymptotic Kolmogorov p-value for distance d at sample size n.
double ks_pvalue(double d, std::size_t n);

struct Chi2Result {
  double statistic = 0.0;
  int dof = 0;
  double pvalue = 1.0;
  double critical_alpha01 = 0.0;
  int merged_bins = 0;
  bool pass_alpha01 = true;
};

// Goodness-of-fit test. Adjacent bins are merged until every expected count
// reaches min_expected; dof = merged_bins - 1.
Chi2Result chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& expected,
                          double min_expected = 5.0);

double chi_square_critical(int dof, double alpha);
double chi_square_pvalue(double statistic, int dof);

}  // namespace interp::stats
