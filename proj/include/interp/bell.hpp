// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "interp/rng.hpp"

namespace interp::bell {

using cdouble = std::complex<double>;

// Two-photon polarization state over {H,V} x {H,V}, amplitude order
// (HH, HV, VH, VV).
struct PhotonPairState {
  std::array<cdouble, 4> amps{};

  // Validates unit norm to 1e-9.
  static PhotonPairState make(const std::array<cdouble, 4>& amps);
  // (|HH> + |VV>)/sqrt(2).
  static PhotonPairState entangled_pair();
  // sqrt(w_hh)|HH> + sqrt(w_vv)|VV>, weights summing to 1.
  static PhotonPairState two_branch(double w_hh, double w_vv);
};

// Hidden two-branch record: the pair's configuration jumping between the
// same-polarization branches of the state in a (possibly per-jump) basis.
struct PairJumpRecord {
  std::vector<double> times;
  std::vector<int> labels;    // 0 = parallel-parallel, 1 = perp-perp
  std::vector<double> angles; // branch basis angle used at each jump
};

// Poisson-timed branch jumps on [0, duration] with Born weights; the state
// must have support only on the two same-polarization branches of the jump
// basis (UnsupportedState otherwise). angle_of(i) gives the basis angle for
// jump i; null means fixed 0 (HV basis).
PairJumpRecord pair_jump_process(const PhotonPairState& state, double rate,
                                 double duration, std::uint64_t seed,
                                 std::uint64_t stream = 0,
                                 const std::function<double(std::size_t)>& angle_of = {});

// Joint Born probabilities in the rotated measurement bases, outcome order
// (++, +-, -+, --). Basis at angle t: (+) = cos t H + sin t V,
// (-) = -sin t H + cos t V.
std::array<double, 4> outcome_probabilities(const PhotonPairState& state,
                                            double angle_a, double angle_b);

// One measurement event; first = Alice's outcome (+1/-1), second = Bob's.
std::pair<int, int> measure_pair(const PhotonPairState& state, double angle_a,
                                 double angle_b, rng::Stream& rng);

struct CorrelationEstimate {
  double e = 0.0;   // empirical <A B>
  double se = 0.0;  // sqrt((1 - e^2)/n)
  std::array<std::uint64_t, 4> counts{};  // ++, +-, -+, --
  std::uint64_t n = 0;
};

CorrelationEstimate correlation(const PhotonPairState& state, double angle_a,
                                double angle_b, std::uint64_t n_trials,
                                std::uint64_t seed, std::uint64_t stream0 = 0);
CorrelationEstimate correlation_serial(const PhotonPairState& state, double angle_a,
                                       double angle_b, std::uint64_t n_trials,
                                       std::uint64_t seed, std::uint64_t stream0 = 0);

// Deterministic local-response baseline: shared hidden angle per trial,
// each side answers sign(cos 2(theta - lambda)).
CorrelationEstimate lhv_correlation(double angle_a, double angle_b,
                                    std::uint64_t n_trials, std::uint64_t seed,
                                    std::uint64_t stream0 = 0);

struct BellSettings {
  double angle_a = 0.0;
  double angle_a_prime = 0.0;
  double angle_b = 0.0;
  double angle_b_prime = 0.0;
  std::uint64_t n_trials = 1;
  std::uint64_t seed = 0;

  // Validates n_trials >= 1.
  static BellSettings make(double a, double a_prime, double b, double b_prime,
                           std::uint64_t n_trials, std::uint64_t seed);
  static BellSettings optimal(std::uint64_t n_trials, std::uint64_t seed);
};

struct ChshResult {
  double s = 0.0;
  double se = 0.0;  // quadrature sum of the four term errors
  std::array<CorrelationEstimate, 4> terms{};  // (a,b), (a,b'), (a',b), (a',b')
  bool insufficient_statistics = false;        // n_trials < 100
};

ChshResult chsh(const PhotonPairState& state, const BellSettings& settings);
ChshResult chsh_lhv(const BellSettings& settings);

struct HiddennessReport {
  ChshResult with_jumps;
  ChshResult without_jumps;
  double difference = 0.0;
  double combined_se = 0.0;
  bool consistent = false;  // |difference| < 3 * combined_se (0-se => exact)
  bool insufficient_statistics = false;
  std::uint64_t jump_count = 0;
};

// Runs the CHSH estimate twice, once with a branch jump process active, and
// reports the agreement; the measurement path never reads the jump record.
HiddennessReport hiddenness_check(const PhotonPairState& state,
                                  const BellSettings& settings, double jump_rate,
                                  double duration);

}  // namespace interp::bell
