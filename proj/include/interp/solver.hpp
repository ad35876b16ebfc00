// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "interp/core_field.hpp"
#include "interp/potential.hpp"

namespace interp::tdse {

enum class Method { split_step, crank_nicolson };

struct SolverConfig {
  Method method = Method::split_step;
  double dt = 1e-3;
  long n_steps = 1000;
  long output_every = 10;  // snapshot stride; first and last always kept
  bool strict = false;     // promote the stability warning to an error
};

// One propagator step of cfg.dt. Pure: returns the advanced field, does not
// renormalize. split_step needs a power-of-two grid (periodic); crank_nicolson
// uses zero (Dirichlet) boundaries and a Thomas tridiagonal solve.
core::WaveField step(const core::WaveField& f, const PotentialSpec& pot,
                     const SolverConfig& cfg);

struct RunResult {
  std::vector<core::WaveField> snapshots;  // includes t0 and the final step
  std::vector<double> boundary_leak;       // per snapshot, 5-cell edge mass
  std::vector<double> energy;              // per snapshot, <H>
  double norm_drift = 0.0;                 // max over snapshots of |norm - norm0|
  bool stability_warning = false;          // dt * max|V| >= hbar
};

// Propagate n_steps, recording a snapshot every output_every steps.
RunResult run_experiment(const core::WaveField& initial, const PotentialSpec& pot,
                         const SolverConfig& cfg);

// <H> with the kinetic term discretised the way the given method propagates
// it: spectral k^2 for split_step, centered differences for crank_nicolson.
// Drift in this quantity measures the integrator, not the measurement.
double method_energy(const core::WaveField& f, const std::vector<double>& v,
                     Method method);

// Lowest eigenvector of the centered-difference Hamiltonian, computed with
// Rayleigh-quotient inverse iteration. The result is real, non-negative at
// its peak, unit norm, and is an exact stationary state of the
// crank_nicolson propagator (the Cayley step commutes with H).
core::WaveField ground_state(const core::Grid& grid, const PotentialSpec& pot,
                             double hbar = 1.0, double mass = 1.0);
double ground_state_energy(const core::Grid& grid, const PotentialSpec& pot,
                           double hbar = 1.0, double mass = 1.0);

// Probability mass strictly right of `cut` (trapezoid).
double transmitted_fraction(const core::WaveField& f, double cut);

struct BeamSplitterTuning {
  double height = 0.0;
  double transmitted = 0.0;
  int probes = 0;
};

// Bisect the barrier height until the transmitted fraction after the probe
// run is within `tol` of 0.5. The returned height is deterministic for a
// given initial state and config.
BeamSplitterTuning tune_beam_splitter(const core::WaveField& initial,
                                      PotentialSpec barrier,
                                      const SolverConfig& cfg, double cut,
                                      double tol = 0.005);

struct BranchSplitReport {
  double lobe_overlap = 0.0;       // probability mass in a band around the cut
  double independent_propagation_error = 0.0;  // || U(L) + U(R) - U(L+R) ||
  double density_additivity_error = 0.0;       // integral |rho_sum - rho_L - rho_R|
  double visibility = 0.0;         // fringe contrast where both lobes overlap
};

// Cut the field at `cut`, propagate the pieces and their sum under `further`
// for cfg.n_steps, and report how branch-independence holds up. Throws
// LobesNotSeparated when more than 1e-3 probability sits in the cut band.
BranchSplitReport branch_split_check(const core::WaveField& at_cut, double cut,
                                     const PotentialSpec& further,
                                     const SolverConfig& cfg);

}  // namespace interp::tdse
