// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/bell.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include "interp/errors.hpp"
#include "interp/jumper.hpp"
#include "interp/parallel.hpp"

namespace interp::bell {

namespace {

double total_norm(const std::array<cdouble, 4>& a) {
  double s = 0.0;
  for (const auto& c : a) s += std::norm(c);
  return s;
}

// Amplitude of the state on |s_a at angle a> x |s_b at angle b>.
cdouble projected_amp(const PhotonPairState& st, double a, int sa, double b, int sb) {
  const double ca = std::cos(a), sa_ = std::sin(a);
  const double cb = std::cos(b), sb_ = std::sin(b);
  // Conjugates are real; basis row for outcome +: (cos, sin), -: (-sin, cos).
  const double ah = (sa > 0) ? ca : -sa_;
  const double av = (sa > 0) ? sa_ : ca;
  const double bh = (sb > 0) ? cb : -sb_;
  const double bv = (sb > 0) ? sb_ : cb;
  return ah * bh * st.amps[0] + ah * bv * st.amps[1] + av * bh * st.amps[2] +
         av * bv * st.amps[3];
}

CorrelationEstimate estimate_from_counts(const std::array<std::uint64_t, 4>& c) {
  CorrelationEstimate est;
  est.counts = c;
  est.n = c[0] + c[1] + c[2] + c[3];
  const auto agree = static_cast<double>(c[0] + c[3]);
  const auto disagree = static_cast<double>(c[1] + c[2]);
  est.e = (agree - disagree) / static_cast<double>(est.n);
  est.se = std::sqrt(std::max(0.0, 1.0 - est.e * est.e) /
                     static_cast<double>(est.n));
  return est;
}

template <typename OutcomeFn>
CorrelationEstimate accumulate_trials(std::uint64_t n_trials, bool parallel,
                                      OutcomeFn outcome) {
  if (n_trials < 1) throw OutOfRange("n_trials must be >= 1");
  std::array<std::atomic<std::uint64_t>, 4> counts{};
  auto body = [&](std::size_t i) {
    counts[outcome(i)].fetch_add(1, std::memory_order_relaxed);
  };
  if (parallel)
    parallel::parallel_for(static_cast<std::size_t>(n_trials), body);
  else
    parallel::serial_for(static_cast<std::size_t>(n_trials), body);
  return estimate_from_counts({counts[0].load(), counts[1].load(),
                               counts[2].load(), counts[3].load()});
}

CorrelationEstimate correlation_impl(const PhotonPairState& state, double a,
                                     double b, std::uint64_t n_trials,
                                     std::uint64_t seed, std::uint64_t stream0,
                                     bool parallel) {
  const auto p = outcome_probabilities(state, a, b);
  const std::vector<double> weights(p.begin(), p.end());
  return accumulate_trials(n_trials, parallel, [&](std::size_t i) {
    rng::Stream rng(seed, stream0 + i);
    return jump::sample_label(weights, rng);
  });
}

}  // namespace

PhotonPairState PhotonPairState::make(const std::array<cdouble, 4>& amps) {
  if (std::abs(total_norm(amps) - 1.0) > 1e-9)
    throw OutOfRange("pair state must be normalized");
  PhotonPairState st;
  st.amps = amps;
  return st;
}

PhotonPairState PhotonPairState::entangled_pair() {
  const double r = 1.0 / std::sqrt(2.0);
  return make({cdouble{r, 0}, cdouble{0, 0}, cdouble{0, 0}, cdouble{r, 0}});
}

PhotonPairState PhotonPairState::two_branch(double w_hh, double w_vv) {
  if (w_hh < 0.0 || w_vv < 0.0 || std::abs(w_hh + w_vv - 1.0) > 1e-9)
    throw OutOfRange("branch weights must be >= 0 and sum to 1");
  return make({cdouble{std::sqrt(w_hh), 0}, cdouble{0, 0}, cdouble{0, 0},
               cdouble{std::sqrt(w_vv), 0}});
}

PairJumpRecord pair_jump_process(const PhotonPairState& state, double rate,
                                 double duration, std::uint64_t seed,
                                 std::uint64_t stream,
                                 const std::function<double(std::size_t)>& angle_of) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw OutOfRange("jump rate must be finite and >= 0");
  if (!(duration >= 0.0)) throw OutOfRange("duration must be >= 0");

  rng::Stream rng(seed, stream);
  PairJumpRecord rec;
  double t = 0.0;
  std::size_t i = 0;
  while (true) {
    const double theta = angle_of ? angle_of(i) : 0.0;
    // Branch weights in the rotated same-polarization basis.
    const double w_par = std::norm(projected_amp(state, theta, +1, theta, +1));
    const double w_perp = std::norm(projected_amp(state, theta, -1, theta, -1));
    const double cross = std::norm(projected_amp(state, theta, +1, theta, -1)) +
                         std::norm(projected_amp(state, theta, -1, theta, +1));
    if (cross > 1e-12)
      throw UnsupportedState(
          "state has support outside the two same-polarization branches");
    rec.times.push_back(t);
    rec.angles.push_back(theta);
    rec.labels.push_back(
        static_cast<int>(jump::sample_label({w_par, w_perp}, rng)));
    ++i;
    t += rng.exponential(rate);
    if (!(t <= duration)) break;
  }
  return rec;
}

std::array<double, 4> outcome_probabilities(const PhotonPairState& state,
                                            double angle_a, double angle_b) {
  std::array<double, 4> p{};
  p[0] = std::norm(projected_amp(state, angle_a, +1, angle_b, +1));
  p[1] = std::norm(projected_amp(state, angle_a, +1, angle_b, -1));
  p[2] = std::norm(projected_amp(state, angle_a, -1, angle_b, +1));
  p[3] = std::norm(projected_amp(state, angle_a, -1, angle_b, -1));
  return p;
}

std::pair<int, int> measure_pair(const PhotonPairState& state, double angle_a,
                                 double angle_b, rng::Stream& rng) {
  const auto p = outcome_probabilities(state, angle_a, angle_b);
  const auto k = jump::sample_label({p[0], p[1], p[2], p[3]}, rng);
  return {k < 2 ? +1 : -1, (k % 2 == 0) ? +1 : -1};
}

CorrelationEstimate correlation(const PhotonPairState& state, double angle_a,
                                double angle_b, std::uint64_t n_trials,
                                std::uint64_t seed, std::uint64_t stream0) {
  return correlation_impl(state, angle_a, angle_b, n_trials, seed, stream0, true);
}

CorrelationEstimate correlation_serial(const PhotonPairState& state, double angle_a,
                                       double angle_b, std::uint64_t n_trials,
                                       std::uint64_t seed, std::uint64_t stream0) {
  return correlation_impl(state, angle_a, angle_b, n_trials, seed, stream0, false);
}

CorrelationEstimate lhv_correlation(double angle_a, double angle_b,
                                    std::uint64_t n_trials, std::uint64_t seed,
                                    std::uint64_t stream0) {
  return accumulate_trials(n_trials, true, [&](std::size_t i) {
    rng::Stream rng(seed, stream0 + i);
    const double lambda = rng.uniform(0.0, std::numbers::pi);
    const int sa = std::cos(2.0 * (angle_a - lambda)) >= 0.0 ? +1 : -1;
    const int sb = std::cos(2.0 * (angle_b - lambda)) >= 0.0 ? +1 : -1;
    if (sa > 0) return sb > 0 ? 0u : 1u;
    return sb > 0 ? 2u : 3u;
  });
}

BellSettings BellSettings::make(double a, double a_prime, double b, double b_prime,
                                std::uint64_t n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw OutOfRange("n_trials must be >= 1");
  return BellSettings{a, a_prime, b, b_prime, n_trials, seed};
}

BellSettings BellSettings::optimal(std::uint64_t n_trials, std::uint64_t seed) {
  return make(0.0, std::numbers::pi / 4.0, std::numbers::pi / 8.0,
              3.0 * std::numbers::pi / 8.0, n_trials, seed);
}

namespace {

template <typename CorrFn>
ChshResult chsh_impl(const BellSettings& st, CorrFn corr) {
  ChshResult res;
  res.insufficient_statistics = st.n_trials < 100;
  const double pairs[4][2] = {{st.angle_a, st.angle_b},
                              {st.angle_a, st.angle_b_prime},
                              {st.angle_a_prime, st.angle_b},
                              {st.angle_a_prime, st.angle_b_prime}};
  double var = 0.0;
  for (int q = 0; q < 4; ++q) {
    res.terms[static_cast<std::size_t>(q)] =
        corr(pairs[q][0], pairs[q][1],
             static_cast<std::uint64_t>(q) * st.n_trials);
    var += res.terms[static_cast<std::size_t>(q)].se *
           res.terms[static_cast<std::size_t>(q)].se;
  }
  res.s = res.terms[0].e - res.terms[1].e + res.terms[2].e + res.terms[3].e;
  res.se = std::sqrt(var);
  return res;
}

}  // namespace

ChshResult chsh(const PhotonPairState& state, const BellSettings& settings) {
  if (settings.n_trials < 1) throw OutOfRange("n_trials must be >= 1");
  return chsh_impl(settings, [&](double a, double b, std::uint64_t stream0) {
    return correlation(state, a, b, settings.n_trials, settings.seed, stream0);
  });
}

ChshResult chsh_lhv(const BellSettings& settings) {
  if (settings.n_trials < 1) throw OutOfRange("n_trials must be >= 1");
  return chsh_impl(settings, [&](double a, double b, std::uint64_t stream0) {
    return lhv_correlation(a, b, settings.n_trials, settings.seed, stream0);
  });
}

HiddennessReport hiddenness_check(const PhotonPairState& state,
                                  const BellSettings& settings, double jump_rate,
                                  double duration) {
  HiddennessReport rep;
  rep.without_jumps = chsh(state, settings);

  // The jump record lives in its own stream space; nothing below feeds it
  // into the measurement path.
  const auto record =
      pair_jump_process(state, jump_rate, duration, settings.seed ^ 0x9e3779b97f4a7c15ULL);
  rep.jump_count = record.times.size();
  rep.with_jumps = chsh(state, settings);

  rep.difference = std::abs(rep.with_jumps.s - rep.without_jumps.s);
  rep.combined_se = std::sqrt(rep.with_jumps.se * rep.with_jumps.se +
                              rep.without_jumps.se * rep.without_jumps.se);
  rep.consistent = rep.difference <= 3.0 * rep.combined_se;
  rep.insufficient_statistics = rep.with_jumps.insufficient_statistics;
  return rep;
}

}  // namespace interp::bell
