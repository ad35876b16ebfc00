// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <boost/math/distributions/chi_squared.hpp>

#include "interp/errors.hpp"

namespace interp::stats {

double kahan_sum(const std::vector<double>& v) {
  // Neumaier's variant: also exact when the running sum itself cancels.
  double sum = 0.0, c = 0.0;
  for (double x : v) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

double trapezoid(const std::vector<double>& f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

DensityCdf::DensityCdf(std::vector<double> x, std::vector<double> rho)
    : x_(std::move(x)), rho_(std::move(rho)) {
  if (x_.size() != rho_.size() || x_.size() < 2) {
    throw OutOfRange("DensityCdf needs matching x/rho arrays of size >= 2");
  }
  for (double& r : rho_) {
    if (r < 0.0) r = 0.0;  // clip FD noise at nodes
  }
  cum_.resize(x_.size());
  cum_[0] = 0.0;
  for (std::size_t i = 1; i < x_.size(); ++i) {
    cum_[i] = cum_[i - 1] + 0.5 * (rho_[i - 1] + rho_[i]) * (x_[i] - x_[i - 1]);
  }
  total_ = cum_.back();
  if (!(total_ > 0.0)) throw OutOfRange("DensityCdf: density has zero mass");
  for (double& c : cum_) c /= total_;
  cum_.back() = 1.0;
}

double DensityCdf::cdf(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return 1.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double a = rho_[i] / total_;
  const double b = rho_[i + 1] / total_;
  // integral of the linear density over [x_i, x]
  return cum_[i] + h * s * (a + 0.5 * s * (b - a));
}

double DensityCdf::quantile(double u) const {
  if (u < 0.0 || u > 1.0) throw OutOfRange("quantile argument outside [0,1]");
  if (u <= 0.0) return x_.front();
  if (u >= 1.0) return x_.back();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  i = (i == 0) ? 0 : i - 1;
  while (i + 1 < cum_.size() && cum_[i + 1] <= cum_[i]) ++i;  // skip empty cells
  const double h = x_[i + 1] - x_[i];
  const double a = rho_[i] / total_;
  const double b = rho_[i + 1] / total_;
  const double du = u - cum_[i];
  // solve a*s + (b-a)/2 * s^2 = du/h for s in [0,1]
  const double q = 0.5 * (b - a);
  double s;
  if (std::abs(q) < 1e-14 * std::max(a, b)) {
    s = (a > 0.0) ? du / (h * a) : 0.5;
  } else {
    const double disc = a * a + 4.0 * q * du / h;
    s = (-a + std::sqrt(std::max(0.0, disc))) / (2.0 * q);
  }
  s = std::clamp(s, 0.0, 1.0);
  return x_[i] + s * h;
}

double ks_statistic(std::vector<double> samples, const DensityCdf& ref) {
  if (samples.empty()) throw OutOfRange("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = ref.cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(f - lo), std::abs(hi - f)));
  }
  return d;
}

double ks_critical_alpha01(std::size_t n) {
  return 1.63 / std::sqrt(static_cast<double>(n));
}

double ks_pvalue(double d, std::size_t n) {
  const double lambda = d * std::sqrt(static_cast<double>(n));
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

Chi2Result chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& expected,
                          double min_expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw OutOfRange("chi_square_gof: size mismatch");
  }
  std::vector<double> obs_m, exp_m;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (obs_m.empty()) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
    } else {
      obs_m.back() += o_acc;  // fold the short tail into the last bin
      exp_m.back() += e_acc;
    }
  }
  Chi2Result r;
  r.merged_bins = static_cast<int>(obs_m.size());
  if (r.merged_bins < 2) {
    throw OutOfRange("chi_square_gof: fewer than 2 usable bins");
  }
  for (std::size_t i = 0; i < obs_m.size(); ++i) {
    const double diff = obs_m[i] - exp_m[i];
    r.statistic += diff * diff / exp_m[i];
  }
  r.dof = r.merged_bins - 1;
  r.pvalue = chi_square_pvalue(r.statistic, r.dof);
  r.critical_alpha01 = chi_square_critical(r.dof, 0.01);
  r.pass_alpha01 = r.statistic < r.critical_alpha01;
  return r;
}

double chi_square_critical(int dof, double alpha) {
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(dist, 1.0 - alpha);
}

double chi_square_pvalue(double statistic, int dof) {
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace interp::stats
