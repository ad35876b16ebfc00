// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/bohm.hpp"

#include <algorithm>
#include <cmath>

#include "interp/parallel.hpp"
#include "interp/rng.hpp"

namespace interp::bohm {

using core::WaveField;

std::vector<double> velocity_grid(const WaveField& f) {
  const int n = f.grid.n_points;
  std::vector<double> v(n, 0.0);
  const double thr = node_threshold(f);
  const double pref = f.hbar / (f.mass * 2.0 * f.grid.dx());
  for (int i = 1; i + 1 < n; ++i) {
    const double mag = std::abs(f.psi[i]);
    if (mag < thr) continue;  // node convention: v = 0
    const core::cdouble d = f.psi[i + 1] - f.psi[i - 1];
    v[i] = pref * std::imag(d / f.psi[i]);
  }
  return v;
}

namespace {

void check_inside(const core::Grid& g, double x) {
  if (x < g.x_min || x > g.x_max) {
    throw OutOfGrid("x = " + std::to_string(x) + " outside [" +
                    std::to_string(g.x_min) + ", " + std::to_string(g.x_max) + "]");
  }
}

double lerp_on_grid(const core::Grid& g, const std::vector<double>& values,
                    double x) {
  const double s = (x - g.x_min) / g.dx();
  int i = static_cast<int>(std::floor(s));
  i = std::clamp(i, 0, g.n_points - 2);
  const double frac = std::clamp(s - i, 0.0, 1.0);
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

}  // namespace

double guidance_velocity(const WaveField& f, double x) {
  check_inside(f.grid, x);
  return lerp_on_grid(f.grid, velocity_grid(f), x);
}

double quantum_potential(const WaveField& f, double x) {
  check_inside(f.grid, x);
  const int n = f.grid.n_points;
  const double dx = f.grid.dx();
  const double s = (x - f.grid.x_min) / dx;
  int i = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
  const double thr = node_threshold(f);
  const double pref = -f.hbar * f.hbar / (2.0 * f.mass * dx * dx);

  auto q_at = [&](int k) {
    if (k < 1 || k + 1 >= n) {
      throw OutOfGrid("quantum_potential needs an interior point");
    }
    const double m0 = std::abs(f.psi[k]);
    if (m0 < thr) throw AtNode("quantum_potential at a node of |psi|");
    const double d2 = std::abs(f.psi[k + 1]) - 2.0 * m0 + std::abs(f.psi[k - 1]);
    return pref * d2 / m0;
  };

  const double frac = std::clamp(s - i, 0.0, 1.0);
  return q_at(i) * (1.0 - frac) + q_at(i + 1) * frac;
}

FieldSequence::FieldSequence(const std::vector<WaveField>& snapshots) {
  if (snapshots.size() < 2) {
    throw OutOfRange("FieldSequence needs at least two snapshots");
  }
  grid_ = snapshots.front().grid;
  times_.reserve(snapshots.size());
  v_.reserve(snapshots.size());
  for (const auto& f : snapshots) {
    if (!(f.grid == grid_)) throw GridMismatch("FieldSequence: grids differ");
    if (!times_.empty() && !(f.t > times_.back())) {
      throw OutOfRange("FieldSequence: snapshots must be strictly time-ordered");
    }
    times_.push_back(f.t);
    v_.push_back(velocity_grid(f));
  }
}

double FieldSequence::velocity_on(const std::vector<double>& v, double x) const {
  return lerp_on_grid(grid_, v, x);
}

double FieldSequence::velocity(double x, double t) const {
  check_inside(grid_, x);
  if (t <= times_.front()) return velocity_on(v_.front(), x);
  if (t >= times_.back()) return velocity_on(v_.back(), x);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  return velocity_on(v_[k], x) * (1.0 - w) + velocity_on(v_[k + 1], x) * w;
}

Trajectory integrate_trajectory(const FieldSequence& seq, double x0,
                                std::int64_t id) {
  const core::Grid& g = seq.grid();
  check_inside(g, x0);
  Trajectory traj;
  traj.id = id;
  traj.times.reserve(seq.times().size());
  traj.positions.reserve(seq.times().size());
  traj.times.push_back(seq.times().front());
  traj.positions.push_back(x0);

  double x = x0;
  const double dx = g.dx();
  for (std::size_t k = 0; k + 1 < seq.times().size(); ++k) {
    const double t0 = seq.times()[k];
    const double t1 = seq.times()[k + 1];
    const double h_full = t1 - t0;
    // deterministic velocity-adaptive substepping: target |v| h <= dx/4
    const double v0 = std::abs(seq.velocity(x, t0));
    int n_sub = 1;
    if (v0 > 0.0) {
      n_sub = std::clamp(static_cast<int>(std::ceil(v0 * h_full / (0.25 * dx))), 1, 64);
    }
    const double h = h_full / n_sub;
    bool left = false;
    for (int s = 0; s < n_sub && !left; ++s) {
      const double ts = t0 + s * h;
      const double k1 = seq.velocity(x, ts);
      const double x2 = x + 0.5 * h * k1;
      if (x2 < g.x_min || x2 > g.x_max) { left = true; break; }
      const double k2 = seq.velocity(x2, ts + 0.5 * h);
      const double x3 = x + 0.5 * h * k2;
      if (x3 < g.x_min || x3 > g.x_max) { left = true; break; }
      const double k3 = seq.velocity(x3, ts + 0.5 * h);
      const double x4 = x + h * k3;
      if (x4 < g.x_min || x4 > g.x_max) { left = true; break; }
      const double k4 = seq.velocity(x4, ts + h);
      const double xn = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (xn < g.x_min || xn > g.x_max) { left = true; break; }
      x = xn;
    }
    if (left) {
      traj.truncated = true;
      break;
    }
    traj.times.push_back(t1);
    traj.positions.push_back(x);
  }
  return traj;
}

stats::DensityCdf position_cdf(const WaveField& f) {
  const core::DensityCurrent dc = core::density(f);
  std::vector<double> xs(f.grid.n_points);
  for (int i = 0; i < f.grid.n_points; ++i) xs[i] = f.grid.x(i);
  return stats::DensityCdf(std::move(xs), dc.rho);
}

std::vector<double> sample_ensemble(const WaveField& f, std::int64_t n,
                                    std::uint64_t seed) {
  if (n < 1) throw OutOfRange("sample_ensemble: n must be >= 1");
  const stats::DensityCdf cdf = position_cdf(f);
  std::vector<double> x0(static_cast<std::size_t>(n));
  parallel::parallel_for(n, [&](std::int64_t i) {
    rng::Stream stream(seed, static_cast<std::uint64_t>(i));
    x0[static_cast<std::size_t>(i)] = cdf.quantile(stream.u01());
  });
  return x0;
}

namespace {

template <typename ForLoop>
std::vector<Trajectory> integrate_impl(const FieldSequence& seq,
                                       const std::vector<double>& x0,
                                       ForLoop&& loop) {
  std::vector<Trajectory> out(x0.size());
  loop(static_cast<std::int64_t>(x0.size()), [&](std::int64_t i) {
    out[static_cast<std::size_t>(i)] =
        integrate_trajectory(seq, x0[static_cast<std::size_t>(i)], i);
  });
  return out;
}

}  // namespace

std::vector<Trajectory> integrate_ensemble(const FieldSequence& seq,
                                           const std::vector<double>& x0) {
  return integrate_impl(seq, x0,
                        [](std::int64_t n, auto&& b) { parallel::parallel_for(n, b); });
}

std::vector<Trajectory> integrate_ensemble_serial(const FieldSequence& seq,
                                                  const std::vector<double>& x0) {
  return integrate_impl(seq, x0,
                        [](std::int64_t n, auto&& b) { parallel::serial_for(n, b); });
}

double equivariance_check(const std::vector<Trajectory>& ensemble,
                          const WaveField& final_field) {
  std::vector<double> finals;
  finals.reserve(ensemble.size());
  for (const auto& t : ensemble) {
    if (!t.truncated) finals.push_back(t.positions.back());
  }
  if (finals.empty()) throw OutOfRange("equivariance_check: no surviving trajectories");
  return stats::ks_statistic(std::move(finals), position_cdf(final_field));
}

int no_crossing_violations(const std::vector<Trajectory>& ensemble) {
  std::vector<const Trajectory*> full;
  for (const auto& t : ensemble) {
    if (!t.truncated) full.push_back(&t);
  }
  std::sort(full.begin(), full.end(), [](const Trajectory* a, const Trajectory* b) {
    return a->positions.front() < b->positions.front();
  });
  int violations = 0;
  for (std::size_t i = 1; i < full.size(); ++i) {
    if (full[i]->positions.back() < full[i - 1]->positions.back() - 1e-9) {
      ++violations;
    }
  }
  return violations;
}

}  // namespace interp::bohm
