// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against their serial reference implementations
// and verifies the outputs are identical.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "interp/bell.hpp"
#include "interp/bohm.hpp"
#include "interp/branch_stats.hpp"
#include "interp/core_field.hpp"
#include "interp/jumper.hpp"
#include "interp/parallel.hpp"
#include "interp/solver.hpp"

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-24s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   identical %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "yes" : "NO");
}

}  // namespace

int main() {
  using namespace interp;
  std::printf("worker threads: %d\n\n", parallel::max_threads());

  // Free Gaussian packet evolved a short while; shared by two benchmarks.
  const auto grid = core::Grid::make(-40.0, 40.0, 1024);
  auto f0 = core::make_field(grid);
  const double c = std::pow(std::numbers::pi, -0.25);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    f0.psi[static_cast<std::size_t>(i)] =
        c * std::exp(-0.5 * x * x) * std::exp(std::complex<double>{0.0, 1.0 * x});
  }
  f0 = core::normalized(std::move(f0));
  tdse::SolverConfig cfg;
  cfg.method = tdse::Method::split_step;
  cfg.dt = 1e-3;
  cfg.n_steps = 1000;
  cfg.output_every = 50;
  const auto run = tdse::run_experiment(f0, tdse::PotentialSpec::free_space(), cfg);

  {
    const bohm::FieldSequence seq(run.snapshots);
    const auto x0 = bohm::sample_ensemble(run.snapshots.front(), 2000, 7);
    std::vector<bohm::Trajectory> serial, parallel;
    const double ts = time_ms([&] { serial = bohm::integrate_ensemble_serial(seq, x0); });
    const double tp = time_ms([&] { parallel = bohm::integrate_ensemble(seq, x0); });
    bool same = serial.size() == parallel.size();
    for (std::size_t i = 0; same && i < serial.size(); ++i)
      same = serial[i].positions == parallel[i].positions;
    report("bohm ensemble", ts, tp, same);
  }

  {
    const auto state = bell::PhotonPairState::entangled_pair();
    bell::CorrelationEstimate serial, parallel;
    const double angle = std::numbers::pi / 8.0;
    const double ts =
        time_ms([&] { serial = bell::correlation_serial(state, 0.0, angle, 2000000, 11); });
    const double tp =
        time_ms([&] { parallel = bell::correlation(state, 0.0, angle, 2000000, 11); });
    report("bell correlation", ts, tp, serial.counts == parallel.counts);
  }

  {
    std::vector<double> serial, parallel;
    const auto& field = run.snapshots.back();
    const double ts = time_ms([&] {
      serial = jump::born_samples_serial(field, jump::Basis::position, 2000000, 3, 0);
    });
    const double tp = time_ms([&] {
      parallel = jump::born_samples(field, jump::Basis::position, 2000000, 3, 0);
    });
    report("jumper born samples", ts, tp, serial == parallel);
  }

  {
    branches::WalkReport serial, parallel;
    const double ts =
        time_ms([&] { serial = branches::empirical_branch_walk_serial(100, 0.5, 200000, 5); });
    const double tp =
        time_ms([&] { parallel = branches::empirical_branch_walk(100, 0.5, 200000, 5); });
    report("branch walk", ts, tp, serial.histogram == parallel.histogram);
  }

  return 0;
}
