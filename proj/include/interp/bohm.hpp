// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "interp/core_field.hpp"
#include "interp/stats.hpp"

namespace interp::bohm {

// Guidance velocity (hbar/m) Im(psi'/psi) at x: centered differences on the
// grid, zero at nodes, linear interpolation between nodes. Throws OutOfGrid.
double guidance_velocity(const core::WaveField& f, double x);

// Velocity on every grid node (same convention).
std::vector<double> velocity_grid(const core::WaveField& f);

// Quantum potential -(hbar^2/2m) (d^2|psi|/dx^2)/|psi| at x, centered second
// differences, linear interpolation. Throws AtNode when |psi| is below the
// node threshold at the supporting nodes, OutOfGrid outside the grid.
double quantum_potential(const core::WaveField& f, double x);

struct Trajectory {
  std::int64_t id = 0;
  std::vector<double> times;
  std::vector<double> positions;
  bool truncated = false;  // left the grid; integration stopped there
};

// Time-ordered stack of solver snapshots with precomputed node velocities;
// velocity(x, t) is bilinear (linear in x and in t).
class FieldSequence {
 public:
  explicit FieldSequence(const std::vector<core::WaveField>& snapshots);

  double velocity(double x, double t) const;
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const core::Grid& grid() const { return grid_; }
  const std::vector<double>& times() const { return times_; }

 private:
  double velocity_on(const std::vector<double>& v, double x) const;

  core::Grid grid_;
  std::vector<double> times_;
  std::vector<std::vector<double>> v_;
};

// RK4 between snapshot times with velocity-adaptive deterministic substeps.
Trajectory integrate_trajectory(const FieldSequence& seq, double x0,
                                std::int64_t id = 0);

// Born-distributed starting points; member i draws from stream (seed, i), so
// the result is independent of evaluation order.
std::vector<double> sample_ensemble(const core::WaveField& f, std::int64_t n,
                                    std::uint64_t seed);

// OpenMP over ensemble members (each writes only its own slot), plus the
// serial reference used by the equality tests and the benchmark.
std::vector<Trajectory> integrate_ensemble(const FieldSequence& seq,
                                           const std::vector<double>& x0);
std::vector<Trajectory> integrate_ensemble_serial(const FieldSequence& seq,
                                                  const std::vector<double>& x0);

// KS distance between final trajectory positions and |psi_final|^2.
double equivariance_check(const std::vector<Trajectory>& ensemble,
                          const core::WaveField& final_field);

// Adjacent-pair order inversions at the final time among trajectories sorted
// by their starting point (tolerance 1e-9); nonzero counts flag integration
// error.
int no_crossing_violations(const std::vector<Trajectory>& ensemble);

stats::DensityCdf position_cdf(const core::WaveField& f);

}  // namespace interp::bohm
