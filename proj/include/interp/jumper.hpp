// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "interp/core_field.hpp"
#include "interp/rng.hpp"
#include "interp/tensor_state.hpp"

namespace interp::jump {

enum class Basis { position, momentum };

std::string basis_name(Basis b);
Basis basis_from_name(const std::string& name);  // UnknownLabel

// Stochastic resampling process: configuration jumps at Poisson(rate) times,
// each jump drawing afresh from the instantaneous Born density in `basis`.
// Between jumps the configuration is frozen.
struct JumpProcess {
  Basis basis = Basis::position;
  double rate = 10.0;  // expected jumps per unit time, >= 0
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // distinct streams give independent runs
};

struct JumpRecord {
  std::vector<double> times;   // first entry is the initial sample at t0
  std::vector<double> values;  // grid-cell value (x or k)
  Basis basis = Basis::position;
};

struct MomentumDensity {
  std::vector<double> k;        // ascending, length n
  std::vector<double> density;  // |psi_tilde|^2, sum(density)*dk == sum(|psi|^2)*dx
};

// Discrete Fourier density on the grid's conjugate momentum lattice.
// Requires a power-of-two grid.
MomentumDensity momentum_density(const core::WaveField& field);

// One Born draw in the given basis; returns the sampled grid-cell value.
double jump_sample(const core::WaveField& field, Basis basis, rng::Stream& rng);

// Draw an index with probability proportional to weights[i] (>= 0, not all 0).
std::size_t sample_label(const std::vector<double>& weights, rng::Stream& rng);

// Run the process against a time-ordered snapshot sequence covering [t0, T];
// fields are linearly interpolated in t between snapshots.
JumpRecord run_jump_process(const std::vector<core::WaveField>& snapshots,
                            const JumpProcess& process);

// Configuration held at time t (value of the last jump at or before t).
double value_at(const JumpRecord& record, double t);

struct SuperluminalReport {
  std::vector<double> speeds;  // |dx|/dt between consecutive jumps
  double max_speed = 0.0;
  double mean_speed = 0.0;
  double threshold = 0.0;
  double fraction_exceeding = 0.0;  // fraction of speeds > threshold
};

// Inter-jump effective velocities; throws TooFewJumps below 2 entries.
SuperluminalReport superluminal_stats(const JumpRecord& record, double threshold);

// Independent Born draws (cell values), one RNG stream per sample so the
// batch is reproducible under any thread count.
std::vector<double> born_samples(const core::WaveField& field, Basis basis,
                                 std::size_t n, std::uint64_t seed,
                                 std::uint64_t stream0);
std::vector<double> born_samples_serial(const core::WaveField& field, Basis basis,
                                        std::size_t n, std::uint64_t seed,
                                        std::uint64_t stream0);

// Two-branch entangled state: electron amplitude in each lobe tensored with
// a discrete record state for the rest of the chain. Lobe fields carry the
// branch weights (their norms need not be 1); rest states are unit norm.
struct BranchJointState {
  core::WaveField lobe_a;
  core::WaveField lobe_b;
  hilbert::TensorState rest_a;
  hilbert::TensorState rest_b;
};

struct BranchOccupancy {
  int branch = 0;  // 0 = lobe_a, 1 = lobe_b
  double electron_position = 0.0;
  double time = 0.0;
};

// Normalized cross-overlap integral |psi_a||psi_b| / (||psi_a|| ||psi_b||).
double lobe_overlap(const BranchJointState& joint);

// Branch label determined by the configuration; BranchesOverlap if the
// lobes are not disjoint (overlap >= 1e-10).
BranchOccupancy branch_occupancy(const BranchJointState& joint, double x1);

// Max pointwise |  |psi_a a_X + psi_b b_X|^2 - (|psi_a|^2|a_X|^2 + |psi_b|^2|b_X|^2) |
// over the grid and the discrete index; ~0 when lobes are disjoint.
double factorization_error(const BranchJointState& joint);

struct JointSample {
  double x = 0.0;
  std::size_t rest_index = 0;
};

// Exact joint Born draws from the assembled two-branch amplitude.
std::vector<JointSample> sample_joint(const BranchJointState& joint, std::size_t n,
                                      std::uint64_t seed, std::uint64_t stream0);

}  // namespace interp::jump
