// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "interp/bohm.hpp"
#include "interp/core_field.hpp"
#include "interp/errors.hpp"
#include "interp/stats.hpp"
#include "oracles.hpp"

using namespace interp;
using interp::core::Grid;

namespace {

// Closed-form spreading-Gaussian snapshots; the solver never runs here.
std::vector<core::WaveField> free_gaussian_sequence(const Grid& g, double x0,
                                                    double s, double k0,
                                                    double t_end, int n_snap) {
  std::vector<core::WaveField> out;
  out.reserve(static_cast<std::size_t>(n_snap));
  for (int i = 0; i < n_snap; ++i) {
    const double t = t_end * static_cast<double>(i) /
                     static_cast<double>(n_snap - 1);
    out.push_back(oracles::free_gaussian_field(g, t, x0, s, k0));
  }
  return out;
}

// Harmonic ground state with its e^{-i omega t / 2} phase attached.
std::vector<core::WaveField> ground_state_sequence(const Grid& g, double omega,
                                                   double t_end, int n_snap) {
  std::vector<core::WaveField> out;
  out.reserve(static_cast<std::size_t>(n_snap));
  for (int i = 0; i < n_snap; ++i) {
    const double t = t_end * static_cast<double>(i) /
                     static_cast<double>(n_snap - 1);
    auto f = oracles::harmonic_ground_field(g, omega);
    const std::complex<double> phase =
        std::exp(std::complex<double>{0.0, -0.5 * omega * t});
    for (auto& a : f.psi) a *= phase;
    f.t = t;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TEST_SUITE("bohm") {

TEST_CASE("guidance velocity matches the closed-form spreading packet") {
  const auto g = Grid::make(-16.0, 16.0, 6401);  // dx = 0.005
  for (const double t : {0.5, 1.0, 2.0}) {
    const auto f = oracles::free_gaussian_field(g, t, 0.0, 1.0, 0.0);
    for (const double x : {-2.0, -0.7, 0.0, 0.31, 1.5}) {
      const double want = oracles::free_gaussian_velocity(x, t, 0.0, 1.0, 0.0);
      CHECK(std::abs(bohm::guidance_velocity(f, x) - want) < 2e-5);
    }
  }
}

TEST_CASE("carrier momentum: v = k0 for a fresh packet") {
  const auto g = Grid::make(-16.0, 16.0, 6401);
  const double k0 = 1.5;
  const auto f = oracles::free_gaussian_field(g, 0.0, 0.0, 1.0, k0);
  for (const double x : {-1.0, 0.0, 0.8})
    CHECK(std::abs(bohm::guidance_velocity(f, x) - k0) < 1e-4);
}

TEST_CASE("velocity_grid agrees with pointwise evaluation on the nodes") {
  const auto g = Grid::make(-12.0, 12.0, 601);
  const auto f = oracles::free_gaussian_field(g, 1.0, 0.5, 1.0, 0.7);
  const auto v = bohm::velocity_grid(f);
  REQUIRE(v.size() == static_cast<std::size_t>(g.n_points));
  for (int i = 100; i < 500; i += 37)
    CHECK(v[static_cast<std::size_t>(i)] ==
          doctest::Approx(bohm::guidance_velocity(f, g.x(i))).epsilon(1e-12));
}

TEST_CASE("quantum potential of the harmonic ground state is (1 - x^2)/2") {
  // omega = 1: Q(x) = (1 - x^2)/2, so Q(0) = 1/2, Q(1) = 0, Q(sqrt 2) = -1/2.
  const auto g = Grid::make(-8.0, 8.0, 1601);
  const auto f = oracles::harmonic_ground_field(g, 1.0);
  CHECK(bohm::quantum_potential(f, 0.0) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(std::abs(bohm::quantum_potential(f, 1.0)) < 1e-4);
  CHECK(bohm::quantum_potential(f, std::sqrt(2.0)) ==
        doctest::Approx(-0.5).epsilon(1e-4));
  // Q + V is flat at the ground energy omega/2.
  for (const double x : {-1.7, -0.4, 0.9, 2.2}) {
    const double q = bohm::quantum_potential(f, x);
    CHECK(q + 0.5 * x * x == doctest::Approx(0.5).epsilon(1e-4));
  }
}

TEST_CASE("quantum potential throws at a node and outside the grid") {
  const auto g = Grid::make(-8.0, 8.0, 1601);  // x = 0 is a grid node
  const auto excited = oracles::harmonic_first_excited_field(g, 1.0);
  CHECK_THROWS_AS(bohm::quantum_potential(excited, 0.0), interp::AtNode);
  const auto f = oracles::harmonic_ground_field(g, 1.0);
  CHECK_THROWS_AS(bohm::quantum_potential(f, 9.0), interp::OutOfGrid);
  CHECK_THROWS_AS(bohm::guidance_velocity(f, -8.5), interp::OutOfGrid);
}

TEST_CASE("trajectories ride the spreading packet: x(t) = x0 sqrt(1 + t^2)") {
  const auto g = Grid::make(-24.0, 24.0, 1201);
  const auto seq =
      bohm::FieldSequence(free_gaussian_sequence(g, 0.0, 1.0, 0.0, 2.0, 201));
  for (const double x0 : {-1.5, -0.3, 0.7, 2.0}) {
    const auto tr = bohm::integrate_trajectory(seq, x0, 7);
    CHECK(tr.id == 7);
    CHECK(!tr.truncated);
    REQUIRE(!tr.positions.empty());
    CHECK(tr.times.front() == doctest::Approx(0.0));
    CHECK(tr.times.back() == doctest::Approx(2.0).epsilon(1e-12));
    const double want = x0 * std::sqrt(5.0);
    CHECK(tr.positions.back() == doctest::Approx(want).epsilon(2e-3));
  }
}

TEST_CASE("stationary state: every trajectory is constant") {
  const auto g = Grid::make(-10.0, 10.0, 801);
  const auto seq =
      bohm::FieldSequence(ground_state_sequence(g, 1.0, 5.0, 51));
  for (const double x0 : {-1.1, 0.3, 1.9}) {
    const auto tr = bohm::integrate_trajectory(seq, x0);
    double worst = 0.0;
    for (const double x : tr.positions)
      worst = std::max(worst, std::abs(x - x0));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("trajectory leaving the grid is truncated") {
  const auto g = Grid::make(-4.0, 4.0, 401);
  const auto seq =
      bohm::FieldSequence(free_gaussian_sequence(g, 0.0, 1.0, 0.0, 2.0, 101));
  const auto tr = bohm::integrate_trajectory(seq, 3.0, 1);
  // x(t) = 3 sqrt(1 + t^2) crosses x_max = 4 at t = sqrt(7)/3 < 1.
  CHECK(tr.truncated);
  CHECK(tr.times.back() < 2.0);
  CHECK(std::abs(tr.positions.back()) <= 4.0 + 1e-9);
}

TEST_CASE("sample_ensemble reproduces the Born moments and is per-stream") {
  const auto g = Grid::make(-12.0, 12.0, 1201);
  const auto f = oracles::free_gaussian_field(g, 0.0, 0.0, 1.0, 0.0);
  const auto xs = bohm::sample_ensemble(f, 20000, 42);
  REQUIRE(xs.size() == 20000);
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (const double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  CHECK(std::abs(mean) < 0.02);        // 4 sigma band, sigma_rho^2 = 1/2
  CHECK(std::abs(var - 0.5) < 0.02);
  // member i depends only on (seed, i), not on the ensemble size
  const auto head = bohm::sample_ensemble(f, 50, 42);
  for (std::size_t i = 0; i < head.size(); ++i) CHECK(head[i] == xs[i]);
  const auto other = bohm::sample_ensemble(f, 50, 43);
  CHECK(other != head);
}

TEST_CASE("equivariance: Born-sampled ensemble stays Born-distributed") {
  const auto g = Grid::make(-24.0, 24.0, 1201);
  const auto snaps = free_gaussian_sequence(g, 0.0, 1.0, 0.0, 1.0, 101);
  const auto seq = bohm::FieldSequence(snaps);
  const auto x0 = bohm::sample_ensemble(snaps.front(), 2000, 9001);
  const auto ens = bohm::integrate_ensemble(seq, x0);
  REQUIRE(ens.size() == x0.size());
  const double ks = bohm::equivariance_check(ens, snaps.back());
  CHECK(ks < stats::ks_critical_alpha01(2000));  // 0.0364
  CHECK(bohm::no_crossing_violations(ens) == 0);
}

TEST_CASE("parallel and serial ensembles are bitwise identical") {
  const auto g = Grid::make(-24.0, 24.0, 1201);
  const auto snaps = free_gaussian_sequence(g, 0.0, 1.0, 0.0, 1.0, 51);
  const auto seq = bohm::FieldSequence(snaps);
  const auto x0 = bohm::sample_ensemble(snaps.front(), 64, 5);
  const auto a = bohm::integrate_ensemble(seq, x0);
  const auto b = bohm::integrate_ensemble_serial(seq, x0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].positions == b[i].positions);
    CHECK(a[i].times == b[i].times);
    CHECK(a[i].id == b[i].id);
  }
}

TEST_CASE("position_cdf: symmetric density has median zero") {
  const auto g = Grid::make(-10.0, 10.0, 801);
  const auto f = oracles::free_gaussian_field(g, 0.0, 0.0, 1.0, 0.0);
  auto cdf = bohm::position_cdf(f);
  CHECK(std::abs(cdf.cdf(0.0) - 0.5) < 1e-10);
  CHECK(std::abs(cdf.quantile(0.5)) < 1e-8);
}

}  // TEST_SUITE
