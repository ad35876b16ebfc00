// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace interp::branches {

// N repeated two-outcome experiments: 2^N branches, C(N, n_t) of them with
// n_t transmissions.
struct Branching {
  int n = 1;
  double p = 0.5;

  // Validates n >= 1 and p in (0,1).
  static Branching make(int n, double p);
};

// Exact C(n, k) as a decimal string.
std::string branch_count(int n, int k);

// log2 C(n, k): exact big-integer route for n <= 500, log-gamma beyond.
double log2_branch_count(int n, int k);

using Predicate = std::function<bool(int)>;

// Born measure sum_{pred(k)} C(n,k) p^k (1-p)^(n-k). Exact rational
// arithmetic for n <= 2000, mode-anchored log-space recurrence beyond.
double born_measure_of_set(int n, double p, const Predicate& pred);

// Branch-counting measure sum_{pred(k)} C(n,k) / 2^n.
double counting_measure_of_set(int n, const Predicate& pred);

// Full pmf over k = 0..n (Born weights).
std::vector<double> born_pmf(int n, double p);

struct CountingVsBornRow {
  int n = 0;
  double p = 0.5;
  double epsilon = 0.0;
  int k_lo = 0;  // integer bounds of {|k/n - p| <= epsilon}, snapped to
  int k_hi = 0;  // absorb the floating-point representation of n(p +- eps)
  double born_measure = 0.0;
  double counting_measure = 0.0;
  double hoeffding_bound = 0.0;  // 2 exp(-2 n eps^2), bounds 1 - born_measure
};

// Weight of the Born-typical set under both measures; for p != 1/2 the
// counting measure of the set collapses while the Born measure -> 1.
CountingVsBornRow counting_vs_born(int n, double p, double epsilon);

struct StirlingReport {
  int n = 0;
  double log2_exact = 0.0;    // log2 C(n, n/2)
  double log2_crude = 0.0;    // n
  double log2_refined = 0.0;  // n - log2(pi n / 2) / 2
  double crude_error = 0.0;
  double refined_error = 0.0;
  double refined_rel_error = 0.0;
};

// Requires n >= 10 (OutOfRange).
StirlingReport stirling_typicality(int n);

struct WalkReport {
  int n = 0;
  double p = 0.5;
  std::uint64_t n_runs = 0;
  std::vector<std::uint64_t> histogram;  // counts of n_t = 0..n
  double mean_fraction = 0.0;            // mean n_t / n over runs
  double chi_square = 0.0;
  double chi_square_critical = 0.0;  // alpha = 0.01
  int dof = 0;
  bool consistent = true;
};

// n_runs independent Bernoulli(p)^n sequences with per-run RNG streams;
// n_runs = 0 gives an empty report.
WalkReport empirical_branch_walk(int n, double p, std::uint64_t n_runs,
                                 std::uint64_t seed);
WalkReport empirical_branch_walk_serial(int n, double p, std::uint64_t n_runs,
                                        std::uint64_t seed);

struct DistributionRow {
  int k = 0;
  std::string w;  // exact C(n, k)
  double counting_fraction = 0.0;
  double born_weight = 0.0;
};

std::vector<DistributionRow> distribution_table(int n, double p);

}  // namespace interp::branches
