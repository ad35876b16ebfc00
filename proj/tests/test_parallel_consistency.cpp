// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Thread-count independence: every parallel kernel must produce bitwise the
// same output as its serial reference, and the same output again under an
// INTERP_LAB_THREADS=1 cap. Bodies own disjoint slots, so this is a hard
// equality, not a tolerance.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <vector>

#include <doctest.h>

#include "interp/bell.hpp"
#include "interp/bohm.hpp"
#include "interp/branch_stats.hpp"
#include "interp/core_field.hpp"
#include "interp/jumper.hpp"
#include "interp/parallel.hpp"

using namespace interp;

namespace {

struct ThreadCapGuard {
  explicit ThreadCapGuard(const char* value) {
    ::setenv("INTERP_LAB_THREADS", value, 1);
  }
  ~ThreadCapGuard() { ::unsetenv("INTERP_LAB_THREADS"); }
};

core::WaveField two_hump_field(const core::Grid& g) {
  auto f = core::make_field(g);
  for (int i = 0; i < g.n_points; ++i) {
    const double x = g.x(i);
    f.psi[static_cast<std::size_t>(i)] = {
        std::exp(-(x - 2.0) * (x - 2.0)) + 0.5 * std::exp(-(x + 3.0) * (x + 3.0)),
        0.0};
  }
  return core::normalized(f);
}

bohm::FieldSequence spreading_sequence() {
  const auto g = core::Grid::make(-12.0, 12.0, 401);
  std::vector<core::WaveField> snaps;
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.05 * k;
    auto f = core::make_field(g);
    const std::complex<double> alpha{1.0, t};
    for (int i = 0; i < g.n_points; ++i) {
      const double x = g.x(i);
      f.psi[static_cast<std::size_t>(i)] =
          std::pow(M_PI, -0.25) / std::sqrt(alpha) *
          std::exp(-x * x / (2.0 * alpha));
    }
    f.t = t;
    snaps.push_back(std::move(f));
  }
  return bohm::FieldSequence(std::move(snaps));
}

bool same_trajectories(const std::vector<bohm::Trajectory>& a,
                       const std::vector<bohm::Trajectory>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id || a[i].times != b[i].times ||
        a[i].positions != b[i].positions || a[i].truncated != b[i].truncated)
      return false;
  }
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("parallel");

TEST_CASE("max_threads honors the environment cap") {
  {
    ThreadCapGuard cap("1");
    CHECK(parallel::max_threads() == 1);
  }
  {
    ThreadCapGuard cap("0");  // 0 = no cap
    CHECK(parallel::max_threads() >= 1);
  }
  {
    ThreadCapGuard cap("not_a_number");
    CHECK(parallel::max_threads() >= 1);
  }
  CHECK(parallel::max_threads() >= 1);
}

TEST_CASE("parallel_for matches serial_for on slot-owned writes") {
  const std::int64_t n = 10000;
  std::vector<double> par(static_cast<std::size_t>(n), 0.0);
  std::vector<double> ser(static_cast<std::size_t>(n), 0.0);
  auto kernel = [](std::int64_t i) {
    return std::sin(0.001 * static_cast<double>(i)) /
           (1.0 + static_cast<double>(i % 97));
  };
  parallel::parallel_for(n, [&](std::int64_t i) {
    par[static_cast<std::size_t>(i)] = kernel(i);
  });
  parallel::serial_for(n, [&](std::int64_t i) {
    ser[static_cast<std::size_t>(i)] = kernel(i);
  });
  CHECK(par == ser);

  int calls = 0;
  parallel::parallel_for(0, [&](std::int64_t) { ++calls; });
  CHECK(calls == 0);
  parallel::parallel_for(1, [&](std::int64_t) { ++calls; });
  CHECK(calls == 1);
}

TEST_CASE("bohm ensemble is thread-count independent") {
  const auto seq = spreading_sequence();
  const auto x0 = bohm::sample_ensemble(two_hump_field(seq.grid()), 500, 97);
  const auto serial = bohm::integrate_ensemble_serial(seq, x0);
  const auto parallel_uncapped = bohm::integrate_ensemble(seq, x0);
  CHECK(same_trajectories(serial, parallel_uncapped));

  ThreadCapGuard cap("1");
  const auto parallel_capped = bohm::integrate_ensemble(seq, x0);
  CHECK(same_trajectories(serial, parallel_capped));
}

TEST_CASE("born sampling is thread-count independent") {
  const auto f = two_hump_field(core::Grid::make(-10.0, 10.0, 512));
  for (auto basis : {jump::Basis::position, jump::Basis::momentum}) {
    CAPTURE(jump::basis_name(basis));
    const auto serial = jump::born_samples_serial(f, basis, 20000, 5, 0);
    CHECK(jump::born_samples(f, basis, 20000, 5, 0) == serial);
    ThreadCapGuard cap("1");
    CHECK(jump::born_samples(f, basis, 20000, 5, 0) == serial);
  }
}

TEST_CASE("bell correlation is thread-count independent") {
  const auto state = bell::PhotonPairState::two_branch(0.5, 0.5);
  const auto serial = bell::correlation_serial(state, 0.0, M_PI / 8, 50000, 7, 0);
  auto same = [&](const bell::CorrelationEstimate& c) {
    return c.e == serial.e && c.se == serial.se && c.n == serial.n &&
           c.counts == serial.counts;
  };
  CHECK(same(bell::correlation(state, 0.0, M_PI / 8, 50000, 7, 0)));
  ThreadCapGuard cap("1");
  CHECK(same(bell::correlation(state, 0.0, M_PI / 8, 50000, 7, 0)));
}

TEST_CASE("branch walk is thread-count independent") {
  const auto serial = branches::empirical_branch_walk_serial(16, 0.3, 20000, 123);
  auto same = [&](const branches::WalkReport& r) {
    return r.histogram == serial.histogram &&
           r.mean_fraction == serial.mean_fraction &&
           r.chi_square == serial.chi_square && r.dof == serial.dof;
  };
  CHECK(same(branches::empirical_branch_walk(16, 0.3, 20000, 123)));
  ThreadCapGuard cap("1");
  CHECK(same(branches::empirical_branch_walk(16, 0.3, 20000, 123)));
}

TEST_SUITE_END();
