// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "interp/errors.hpp"
#include "interp/rng.hpp"
#include "interp/stats.hpp"

using namespace interp::stats;

TEST_SUITE("stats") {

TEST_CASE("kahan_sum keeps cancellation-prone sums exact") {
  CHECK(kahan_sum({1e16, 1.0, -1e16}) == 1.0);
  std::vector<double> v(1000000, 0.1);
  CHECK(std::abs(kahan_sum(v) - 100000.0) < 1e-9);
}

TEST_CASE("trapezoid integrates linear functions exactly") {
  std::vector<double> f(101);
  for (int i = 0; i <= 100; ++i) f[static_cast<std::size_t>(i)] = i * 0.01;
  CHECK(std::abs(trapezoid(f, 0.01) - 0.5) < 1e-15);
}

TEST_CASE("trapezoid error on x^2 is the textbook dx^2/12 bound") {
  std::vector<double> f(101);
  for (int i = 0; i <= 100; ++i) {
    const double x = i * 0.01;
    f[static_cast<std::size_t>(i)] = x * x;
  }
  // |error| = dx^2/12 * (b-a) * f'' = 1e-4/12 * 2 = 1.67e-5
  CHECK(std::abs(trapezoid(f, 0.01) - 1.0 / 3.0) < 2e-5);
  CHECK(std::abs(trapezoid(f, 0.01) - 1.0 / 3.0) > 1e-6);
}

TEST_CASE("DensityCdf: uniform density gives a linear cdf and quantile") {
  std::vector<double> x(51), rho(51, 1.0);
  for (int i = 0; i <= 50; ++i) x[static_cast<std::size_t>(i)] = i * 0.02;
  DensityCdf cdf(x, rho);
  CHECK(std::abs(cdf.total_mass() - 1.0) < 1e-12);
  CHECK(std::abs(cdf.cdf(0.25) - 0.25) < 1e-12);
  CHECK(std::abs(cdf.quantile(0.73) - 0.73) < 1e-12);
  CHECK(cdf.quantile(0.0) == 0.0);
  CHECK(std::abs(cdf.quantile(1.0) - 1.0) < 1e-12);
}

TEST_CASE("DensityCdf: triangular density inverts to sqrt(u) exactly") {
  // rho = 2x on [0,1] is linear within every cell, so the piecewise
  // quadratic cdf equals x^2 with no discretization error at all.
  std::vector<double> x(101), rho(101);
  for (int i = 0; i <= 100; ++i) {
    x[static_cast<std::size_t>(i)] = i * 0.01;
    rho[static_cast<std::size_t>(i)] = 2.0 * i * 0.01;
  }
  DensityCdf cdf(x, rho);
  for (double u : {0.01, 0.1, 0.37, 0.5, 0.82, 0.99})
    CHECK(std::abs(cdf.quantile(u) - std::sqrt(u)) < 1e-12);
  CHECK(std::abs(cdf.cdf(0.6) - 0.36) < 1e-12);
}

TEST_CASE("DensityCdf: quantile and cdf are inverse on random points") {
  std::vector<double> x(200), rho(200);
  interp::rng::Stream rs(5, 0);
  for (int i = 0; i < 200; ++i) {
    x[static_cast<std::size_t>(i)] = -3.0 + i * 0.03;
    const double xx = x[static_cast<std::size_t>(i)];
    rho[static_cast<std::size_t>(i)] = std::exp(-xx * xx) + 0.05;
  }
  DensityCdf cdf(x, rho);
  for (int rep = 0; rep < 100; ++rep) {
    const double u = rs.u01();
    CHECK(std::abs(cdf.cdf(cdf.quantile(u)) - u) < 1e-10);
  }
}

TEST_CASE("DensityCdf rejects bad input") {
  CHECK_THROWS_AS(DensityCdf({0.0}, {1.0}), interp::OutOfRange);
  CHECK_THROWS_AS(DensityCdf({0.0, 1.0}, {0.0, 0.0}), interp::OutOfRange);
  DensityCdf ok({0.0, 1.0}, {1.0, 1.0});
  CHECK_THROWS_AS(ok.quantile(-0.1), interp::OutOfRange);
  CHECK_THROWS_AS(ok.quantile(1.1), interp::OutOfRange);
}

TEST_CASE("ks_statistic is tiny for stratified quantile samples") {
  std::vector<double> x(101), rho(101, 1.0);
  for (int i = 0; i <= 100; ++i) x[static_cast<std::size_t>(i)] = i * 0.01;
  DensityCdf cdf(x, rho);
  const std::size_t n = 1000;
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i)
    samples[i] = cdf.quantile((static_cast<double>(i) + 0.5) / n);
  CHECK(ks_statistic(samples, cdf) <= 0.5 / n + 1e-9);

  // A shifted sample must blow the distance up.
  for (auto& s : samples) s = std::min(1.0, s + 0.2);
  CHECK(ks_statistic(samples, cdf) > 0.15);
}

TEST_CASE("ks_critical_alpha01 matches the asymptotic constant") {
  // c(0.01) = sqrt(-ln(0.005)/2) = 1.6276; critical = c/sqrt(n).
  CHECK(std::abs(ks_critical_alpha01(10000) - 0.016276) < 1e-4);
  CHECK(std::abs(ks_critical_alpha01(100) - 0.16276) < 1e-3);
}

TEST_CASE("ks_pvalue behaves like a p-value") {
  CHECK(ks_pvalue(1e-9, 1000) > 0.999);
  CHECK(ks_pvalue(0.5, 1000) < 1e-6);
  const double at_critical = ks_pvalue(ks_critical_alpha01(1000), 1000);
  CHECK(std::abs(at_critical - 0.01) < 2e-3);
}

TEST_CASE("chi_square_gof: exact match scores zero") {
  const std::vector<double> counts{50.0, 30.0, 20.0};
  const auto r = chi_square_gof(counts, counts);
  CHECK(r.statistic == 0.0);
  CHECK(r.pass_alpha01);
  CHECK(r.dof == 2);
}

TEST_CASE("chi_square_gof: hand-computed two-bin statistic") {
  // (60-50)^2/50 + (40-50)^2/50 = 4.0, below the 6.635 cutoff at dof 1.
  const auto ok = chi_square_gof({60.0, 40.0}, {50.0, 50.0});
  CHECK(std::abs(ok.statistic - 4.0) < 1e-12);
  CHECK(ok.dof == 1);
  CHECK(ok.pass_alpha01);

  // (80-50)^2/50 * 2 = 36.0 fails hard.
  const auto bad = chi_square_gof({80.0, 20.0}, {50.0, 50.0});
  CHECK(std::abs(bad.statistic - 36.0) < 1e-12);
  CHECK_FALSE(bad.pass_alpha01);
  CHECK(bad.pvalue < 1e-8);
}

TEST_CASE("chi_square_gof merges sparse expected bins") {
  std::vector<double> expected{100.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5,
                               0.5, 0.5, 0.5, 100.0};
  std::vector<double> observed = expected;
  const auto r = chi_square_gof(observed, expected);
  CHECK(r.merged_bins < static_cast<int>(expected.size()));
  CHECK(r.merged_bins == 3);  // 100 | ten 0.5s pooled to 5.0 | 100
  CHECK(r.pass_alpha01);
}

TEST_CASE("chi_square_critical matches standard table values") {
  CHECK(std::abs(chi_square_critical(1, 0.01) - 6.6349) < 1e-3);
  CHECK(std::abs(chi_square_critical(10, 0.01) - 23.2093) < 1e-3);
  CHECK(std::abs(chi_square_critical(100, 0.01) - 135.807) < 1e-2);
  CHECK(std::abs(chi_square_critical(1, 0.05) - 3.8415) < 1e-3);
}

TEST_CASE("chi_square_pvalue matches standard table values") {
  CHECK(std::abs(chi_square_pvalue(3.8415, 1) - 0.05) < 2e-4);
  CHECK(std::abs(chi_square_pvalue(23.2093, 10) - 0.01) < 2e-4);
  CHECK(chi_square_pvalue(0.0, 5) == 1.0);
}

TEST_CASE("chi_square_gof rejects invalid input") {
  CHECK_THROWS_AS(chi_square_gof({1.0}, {1.0, 2.0}), interp::OutOfRange);
  CHECK_THROWS_AS(chi_square_gof({1.0, 1.0}, {0.5, 0.5}), interp::OutOfRange);
}

}  // TEST_SUITE
