// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/branch_stats.hpp"

#include <gmpxx.h>

#include <atomic>
#include <cmath>
#include <numbers>

#include "interp/errors.hpp"
#include "interp/parallel.hpp"
#include "interp/rng.hpp"
#include "interp/stats.hpp"

namespace interp::branches {

namespace {

constexpr int kExactBigIntLimit = 500;   // mpz route for log2_branch_count
constexpr int kExactRationalLimit = 2000;  // mpq route for measures

void check_nk(int n, int k) {
  if (n < 1) throw OutOfRange("n must be >= 1");
  if (k < 0 || k > n) throw OutOfRange("k must satisfy 0 <= k <= n");
}

mpz_class binom(int n, int k) {
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return c;
}

double log2_mpz(const mpz_class& v) {
  signed long int exp2;
  const double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return static_cast<double>(exp2) + std::log2(mant);
}

double lchoose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Binomial pmf over k = 0..n, anchored at the mode and extended outward by
// the exact term ratio; far tails underflow to 0 harmlessly.
std::vector<double> pmf_by_recurrence(int n, double p) {
  const double q = 1.0 - p;
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  const int mode = std::min(n, static_cast<int>((n + 1) * p));
  pmf[static_cast<std::size_t>(mode)] =
      std::exp(lchoose(n, mode) + mode * std::log(p) + (n - mode) * std::log1p(-p));
  for (int k = mode; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    pmf[kk + 1] = pmf[kk] * (static_cast<double>(n - k) / (k + 1.0)) * (p / q);
  }
  for (int k = mode; k > 0; --k) {
    const auto kk = static_cast<std::size_t>(k);
    pmf[kk - 1] = pmf[kk] * (static_cast<double>(k) / (n - k + 1.0)) * (q / p);
  }
  return pmf;
}

double measure_exact(int n, double p, const Predicate& pred, bool counting) {
  mpq_class acc(0);
  mpq_class p_rat(p);          // the double's exact rational value
  mpq_class q_rat = 1 - p_rat;
  mpz_class two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(n));

  mpq_class pk(1);  // p^k, maintained incrementally
  for (int k = 0; k <= n; ++k) {
    if (pred(k)) {
      if (counting) {
        acc += mpq_class(binom(n, k)) / mpq_class(two_n);
      } else {
        mpq_class qnk(1);
        mpz_pow_ui(mpq_numref(qnk.get_mpq_t()), q_rat.get_num().get_mpz_t(),
                   static_cast<unsigned long>(n - k));
        mpz_pow_ui(mpq_denref(qnk.get_mpq_t()), q_rat.get_den().get_mpz_t(),
                   static_cast<unsigned long>(n - k));
        qnk.canonicalize();
        acc += mpq_class(binom(n, k)) * pk * qnk;
      }
    }
    if (k < n) pk *= p_rat;
  }
  return acc.get_d();
}

double measure_log_space(int n, double p, const Predicate& pred, bool counting) {
  const auto pmf = counting ? pmf_by_recurrence(n, 0.5) : pmf_by_recurrence(n, p);
  std::vector<double> kept;
  kept.reserve(pmf.size());
  for (int k = 0; k <= n; ++k)
    if (pred(k)) kept.push_back(pmf[static_cast<std::size_t>(k)]);
  return stats::kahan_sum(kept);
}

double measure_of_set(int n, double p, const Predicate& pred, bool counting) {
  if (n < 1) throw OutOfRange("n must be >= 1");
  if (!counting && !(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0,1)");
  if (!pred) throw OutOfRange("predicate must be callable");
  if (n <= kExactRationalLimit) return measure_exact(n, p, pred, counting);
  return measure_log_space(n, p, pred, counting);
}

// Nearest integer when r is within 1e-9 of one (absorbing the floating-point
// representation of n(p +- eps)), otherwise the requested rounding.
int snapped_ceil(double r) {
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, std::abs(r)))
    return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(r));
}

int snapped_floor(double r) {
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, std::abs(r)))
    return static_cast<int>(nearest);
  return static_cast<int>(std::floor(r));
}

WalkReport walk_impl(int n, double p, std::uint64_t n_runs, std::uint64_t seed,
                     bool parallel) {
  if (n < 1) throw OutOfRange("n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0,1)");
  WalkReport rep;
  rep.n = n;
  rep.p = p;
  rep.n_runs = n_runs;
  rep.histogram.assign(static_cast<std::size_t>(n) + 1, 0);
  if (n_runs == 0) return rep;

  std::vector<std::atomic<std::uint64_t>> hist(static_cast<std::size_t>(n) + 1);
  for (auto& h : hist) h.store(0);
  auto body = [&](std::size_t run) {
    rng::Stream rng(seed, run);
    int n_t = 0;
    for (int i = 0; i < n; ++i)
      if (rng.u01() < p) ++n_t;
    hist[static_cast<std::size_t>(n_t)].fetch_add(1, std::memory_order_relaxed);
  };
  if (parallel)
    parallel::parallel_for(static_cast<std::size_t>(n_runs), body);
  else
    parallel::serial_for(static_cast<std::size_t>(n_runs), body);

  double mean_nt = 0.0;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    rep.histogram[k] = hist[k].load();
    mean_nt += static_cast<double>(k) * static_cast<double>(rep.histogram[k]);
  }
  rep.mean_fraction = mean_nt / (static_cast<double>(n_runs) * n);

  const auto pmf = born_pmf(n, p);
  std::vector<double> observed(pmf.size()), expected(pmf.size());
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    observed[k] = static_cast<double>(rep.histogram[k]);
    expected[k] = pmf[k] * static_cast<double>(n_runs);
  }
  const auto chi = stats::chi_square_gof(observed, expected);
  rep.chi_square = chi.statistic;
  rep.chi_square_critical = chi.critical_alpha01;
  rep.dof = chi.dof;
  rep.consistent = chi.pass_alpha01;
  return rep;
}

}  // namespace

Branching Branching::make(int n, double p) {
  if (n < 1) throw OutOfRange("n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0,1)");
  return Branching{n, p};
}

std::string branch_count(int n, int k) {
  check_nk(n, k);
  return binom(n, k).get_str();
}

double log2_branch_count(int n, int k) {
  check_nk(n, k);
  if (n <= kExactBigIntLimit) return log2_mpz(binom(n, k));
  return lchoose(n, k) / std::numbers::ln2;
}

double born_measure_of_set(int n, double p, const Predicate& pred) {
  return measure_of_set(n, p, pred, false);
}

double counting_measure_of_set(int n, const Predicate& pred) {
  return measure_of_set(n, 0.5, pred, true);
}

std::vector<double> born_pmf(int n, double p) {
  if (n < 1) throw OutOfRange("n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0,1)");
  return pmf_by_recurrence(n, p);
}

CountingVsBornRow counting_vs_born(int n, double p, double epsilon) {
  if (n < 1) throw OutOfRange("n must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0,1)");
  if (!(epsilon > 0.0)) throw OutOfRange("epsilon must be > 0");

  CountingVsBornRow row;
  row.n = n;
  row.p = p;
  row.epsilon = epsilon;
  row.k_lo = std::max(0, snapped_ceil(n * (p - epsilon)));
  row.k_hi = std::min(n, snapped_floor(n * (p + epsilon)));
  const auto inside = [&](int k) { return k >= row.k_lo && k <= row.k_hi; };
  row.born_measure = born_measure_of_set(n, p, inside);
  row.counting_measure = counting_measure_of_set(n, inside);
  row.hoeffding_bound = 2.0 * std::exp(-2.0 * n * epsilon * epsilon);
  return row;
}

StirlingReport stirling_typicality(int n) {
  if (n < 10) throw OutOfRange("n must be >= 10");
  StirlingReport rep;
  rep.n = n;
  rep.log2_exact = log2_branch_count(n, n / 2);
  rep.log2_crude = static_cast<double>(n);
  rep.log2_refined =
      n - 0.5 * std::log2(std::numbers::pi * static_cast<double>(n) / 2.0);
  rep.crude_error = std::abs(rep.log2_exact - rep.log2_crude);
  rep.refined_error = std::abs(rep.log2_exact - rep.log2_refined);
  rep.refined_rel_error = rep.refined_error / rep.log2_exact;
  return rep;
}

WalkReport empirical_branch_walk(int n, double p, std::uint64_t n_runs,
                                 std::uint64_t seed) {
  return walk_impl(n, p, n_runs, seed, true);
}

WalkReport empirical_branch_walk_serial(int n, double p, std::uint64_t n_runs,
                                        std::uint64_t seed) {
  return walk_impl(n, p, n_runs, seed, false);
}

std::vector<DistributionRow> distribution_table(int n, double p) {
  if (n < 1 || n > 10000) throw OutOfRange("table supports 1 <= n <= 10000");
  if (!(p > 0.0 && p < 1.0)) throw OutOfRange("p must lie in (0,1)");
  const auto born = born_pmf(n, p);
  const auto counting = pmf_by_recurrence(n, 0.5);
  std::vector<DistributionRow> rows(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    auto& r = rows[static_cast<std::size_t>(k)];
    r.k = k;
    r.w = branch_count(n, k);
    r.counting_fraction = counting[static_cast<std::size_t>(k)];
    r.born_weight = born[static_cast<std::size_t>(k)];
  }
  return rows;
}

}  // namespace interp::branches
