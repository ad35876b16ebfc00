// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "interp/fft.hpp"

namespace interp::tdse {

using core::cdouble;
using core::WaveField;

namespace {

struct SplitStepKernel {
  fft::Plan plan;
  std::vector<cdouble> half_v_phase;  // exp(-i V dt / (2 hbar))
  std::vector<cdouble> k_phase;       // exp(-i hbar k^2 dt / (2 m)), FFT order

  SplitStepKernel(const WaveField& f, const std::vector<double>& v, double dt)
      : plan(static_cast<std::size_t>(f.grid.n_points)) {
    const int n = f.grid.n_points;
    half_v_phase.resize(n);
    for (int i = 0; i < n; ++i) {
      half_v_phase[i] = std::polar(1.0, -v[i] * dt / (2.0 * f.hbar));
    }
    // Periodic wavenumbers for an n-point grid of spacing dx (period n*dx).
    k_phase.resize(n);
    const double dk = 2.0 * std::numbers::pi / (n * f.grid.dx());
    for (int j = 0; j < n; ++j) {
      const double k = dk * (j < n / 2 ? j : j - n);
      k_phase[j] = std::polar(1.0, -f.hbar * k * k * dt / (2.0 * f.mass));
    }
  }

  void apply(std::vector<cdouble>& psi) const {
    const std::size_t n = psi.size();
    for (std::size_t i = 0; i < n; ++i) psi[i] *= half_v_phase[i];
    plan.forward(psi.data());
    for (std::size_t i = 0; i < n; ++i) psi[i] *= k_phase[i];
    plan.inverse(psi.data());
    for (std::size_t i = 0; i < n; ++i) psi[i] *= half_v_phase[i];
  }
};

// Crank-Nicolson with precomputed Thomas forward-elimination coefficients.
// H is the centered-difference Hamiltonian with zero boundary ghosts.
struct CrankNicolsonKernel {
  cdouble off;                 // i*lambda*(-c): off-diagonal of A = 1 + i*lambda*H
  std::vector<cdouble> diag;   // diagonal of A
  std::vector<cdouble> cp;     // Thomas: modified upper coefficients
  std::vector<cdouble> inv_d;  // Thomas: 1 / pivot
  std::vector<double> h_diag;  // 2c + V_i
  double c = 0.0;
  double lambda = 0.0;
  std::vector<cdouble> rhs;

  CrankNicolsonKernel(const WaveField& f, const std::vector<double>& v, double dt) {
    const int n = f.grid.n_points;
    const double dx = f.grid.dx();
    c = f.hbar * f.hbar / (2.0 * f.mass * dx * dx);
    lambda = dt / (2.0 * f.hbar);
    const cdouble il{0.0, lambda};
    off = il * (-c);
    diag.resize(n);
    h_diag.resize(n);
    for (int i = 0; i < n; ++i) {
      h_diag[i] = 2.0 * c + v[i];
      diag[i] = 1.0 + il * h_diag[i];
    }
    cp.resize(n);
    inv_d.resize(n);
    cp[0] = off / diag[0];
    inv_d[0] = 1.0 / diag[0];
    for (int i = 1; i < n; ++i) {
      const cdouble piv = diag[i] - off * cp[i - 1];
      inv_d[i] = 1.0 / piv;
      cp[i] = off * inv_d[i];
    }
    rhs.resize(n);
  }

  void apply(std::vector<cdouble>& psi) {
    const int n = static_cast<int>(psi.size());
    const cdouble il{0.0, lambda};
    for (int i = 0; i < n; ++i) {
      cdouble h = h_diag[i] * psi[i];
      if (i > 0) h -= c * psi[i - 1];
      if (i + 1 < n) h -= c * psi[i + 1];
      rhs[i] = psi[i] - il * h;
    }
    // forward substitution with cached pivots
    psi[0] = rhs[0] * inv_d[0];
    for (int i = 1; i < n; ++i) {
      psi[i] = (rhs[i] - off * psi[i - 1]) * inv_d[i];
    }
    for (int i = n - 2; i >= 0; --i) {
      psi[i] -= cp[i] * psi[i + 1];
    }
  }
};

void validate_config(const WaveField& f, const SolverConfig& cfg) {
  if (static_cast<int>(f.psi.size()) != f.grid.n_points) {
    throw GridMismatch("solver: field size does not match its grid");
  }
  if (!(cfg.dt > 0.0)) throw OutOfRange("solver: dt must be > 0");
  if (cfg.n_steps < 0) throw OutOfRange("solver: n_steps must be >= 0");
  if (cfg.method == Method::split_step &&
      !fft::is_pow2(static_cast<std::size_t>(f.grid.n_points))) {
    throw OutOfRange("split_step requires a power-of-two grid, got " +
                     std::to_string(f.grid.n_points) + " points");
  }
}

bool stability_guard(const WaveField& f, const PotentialSpec& pot,
                     const SolverConfig& cfg) {
  const bool trips = cfg.dt * pot.max_abs(f.grid) >= f.hbar;
  if (trips && cfg.strict) {
    throw UnstableConfig("dt * max|V| >= hbar with strict mode set");
  }
  return trips;
}

}  // namespace

WaveField step(const WaveField& f, const PotentialSpec& pot,
               const SolverConfig& cfg) {
  validate_config(f, cfg);
  const std::vector<double> v = pot.evaluate(f.grid);
  WaveField out = f;
  if (cfg.method == Method::split_step) {
    SplitStepKernel kernel(f, v, cfg.dt);
    kernel.apply(out.psi);
  } else {
    CrankNicolsonKernel kernel(f, v, cfg.dt);
    kernel.apply(out.psi);
  }
  out.t = f.t + cfg.dt;
  return out;
}

double method_energy(const core::WaveField& f, const std::vector<double>& v,
                     Method method) {
  if (method == Method::crank_nicolson) return core::energy_expectation(f, v);
  const int n = f.grid.n_points;
  const double dx = f.grid.dx();
  std::vector<cdouble> hat = f.psi;
  fft::Plan(static_cast<std::size_t>(n)).forward(hat);
  const double dk = 2.0 * std::numbers::pi / (n * dx);
  double kin = 0.0;
  for (int j = 0; j < n; ++j) {
    const double k = dk * (j < n / 2 ? j : j - n);
    kin += k * k * std::norm(hat[j]);
  }
  kin *= f.hbar * f.hbar / (2.0 * f.mass) * dx / n;
  double pot_e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    pot_e += w * v[i] * std::norm(f.psi[i]);
  }
  return kin + pot_e * dx;
}

RunResult run_experiment(const WaveField& initial, const PotentialSpec& pot,
                         const SolverConfig& cfg) {
  validate_config(initial, cfg);
  RunResult result;
  result.stability_warning = stability_guard(initial, pot, cfg);

  const std::vector<double> v = pot.evaluate(initial.grid);
  const long stride = std::max<long>(1, cfg.output_every);
  WaveField work = initial;

  std::optional<SplitStepKernel> ss;
  std::optional<CrankNicolsonKernel> cn;
  if (cfg.method == Method::split_step) {
    ss.emplace(initial, v, cfg.dt);
  } else {
    cn.emplace(initial, v, cfg.dt);
  }

  const double norm0 = core::norm(initial);
  auto record = [&](const WaveField& f) {
    result.snapshots.push_back(f);
    result.boundary_leak.push_back(core::boundary_mass(f));
    result.energy.push_back(method_energy(f, v, cfg.method));
    result.norm_drift = std::max(result.norm_drift, std::abs(core::norm(f) - norm0));
  };

  record(work);
  for (long s = 1; s <= cfg.n_steps; ++s) {
    if (ss) {
      ss->apply(work.psi);
    } else {
      cn->apply(work.psi);
    }
    work.t = initial.t + static_cast<double>(s) * cfg.dt;
    if (s % stride == 0 || s == cfg.n_steps) record(work);
  }
  return result;
}

namespace {

// Solve (T - sigma I) w = b for the real symmetric tridiagonal FD Hamiltonian
// (diag h, constant off-diagonal -c).
void shifted_solve(const std::vector<double>& h, double c, double sigma,
                   const std::vector<double>& b, std::vector<double>& w,
                   std::vector<double>& cp, std::vector<double>& dp) {
  const int n = static_cast<int>(h.size());
  cp.resize(n);
  dp.resize(n);
  double piv = h[0] - sigma;
  if (std::abs(piv) < 1e-300) piv = 1e-300;
  cp[0] = -c / piv;
  dp[0] = b[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = (h[i] - sigma) + c * cp[i - 1];
    if (std::abs(piv) < 1e-300) piv = 1e-300;
    cp[i] = -c / piv;
    dp[i] = (b[i] + c * dp[i - 1]) / piv;
  }
  w.resize(n);
  w[n - 1] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) w[i] = dp[i] - cp[i] * w[i + 1];
}

}  // namespace

WaveField ground_state(const core::Grid& grid, const PotentialSpec& pot,
                       double hbar, double mass) {
  const std::vector<double> v = pot.evaluate(grid);
  const int n = grid.n_points;
  const double dx = grid.dx();
  const double c = hbar * hbar / (2.0 * mass * dx * dx);
  std::vector<double> h(n);
  for (int i = 0; i < n; ++i) h[i] = 2.0 * c + v[i];

  // start from a broad gaussian centered on the potential minimum
  int imin = 0;
  for (int i = 1; i < n; ++i) {
    if (v[i] < v[imin]) imin = i;
  }
  const double xc = grid.x(imin);
  const double s0 = grid.length() / 10.0;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    const double u = (grid.x(i) - xc) / s0;
    w[i] = std::exp(-0.5 * u * u);
  }

  auto apply_h = [&](const std::vector<double>& in, std::vector<double>& out) {
    out.resize(n);
    for (int i = 0; i < n; ++i) {
      double acc = h[i] * in[i];
      if (i > 0) acc -= c * in[i - 1];
      if (i + 1 < n) acc -= c * in[i + 1];
      out[i] = acc;
    }
  };
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  };
  auto renorm = [&](std::vector<double>& a) {
    const double s = std::sqrt(dot(a, a));
    for (double& x : a) x /= s;
  };

  renorm(w);
  std::vector<double> hw, cp, dp, next;
  apply_h(w, hw);
  double sigma = dot(w, hw);
  for (int iter = 0; iter < 200; ++iter) {
    shifted_solve(h, c, sigma, w, next, cp, dp);
    renorm(next);
    w.swap(next);
    apply_h(w, hw);
    const double sigma_new = dot(w, hw);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      resid = std::max(resid, std::abs(hw[i] - sigma_new * w[i]));
    }
    const bool done = resid < 1e-12 * std::max(1.0, std::abs(sigma_new));
    sigma = sigma_new;
    if (done) break;
  }

  int ipeak = 0;
  for (int i = 1; i < n; ++i) {
    if (std::abs(w[i]) > std::abs(w[ipeak])) ipeak = i;
  }
  const double sign = (w[ipeak] < 0.0) ? -1.0 : 1.0;

  WaveField f = core::make_field(grid, hbar, mass);
  for (int i = 0; i < n; ++i) f.psi[i] = sign * w[i];
  return core::normalized(std::move(f));
}

double ground_state_energy(const core::Grid& grid, const PotentialSpec& pot,
                           double hbar, double mass) {
  const WaveField g = ground_state(grid, pot, hbar, mass);
  const std::vector<double> v = pot.evaluate(grid);
  const int n = grid.n_points;
  const double dx = grid.dx();
  const double c = hbar * hbar / (2.0 * mass * dx * dx);
  // Rayleigh quotient of the FD Hamiltonian (plain dot; eigenvector exact)
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double gi = g.psi[i].real();
    double acc = (2.0 * c + v[i]) * gi;
    if (i > 0) acc -= c * g.psi[i - 1].real();
    if (i + 1 < n) acc -= c * g.psi[i + 1].real();
    num += gi * acc;
    den += gi * gi;
  }
  return num / den;
}

double transmitted_fraction(const core::WaveField& f, double cut) {
  const int n = f.grid.n_points;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    if (f.grid.x(i) > cut) {
      const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      s += w * std::norm(f.psi[i]);
    }
  }
  const double total = core::norm(f);
  return s * f.grid.dx() / (total * total);
}

BeamSplitterTuning tune_beam_splitter(const core::WaveField& initial,
                                      PotentialSpec barrier,
                                      const SolverConfig& cfg, double cut,
                                      double tol) {
  if (barrier.kind != PotentialSpec::Kind::beam_splitter &&
      barrier.kind != PotentialSpec::Kind::gaussian_barrier) {
    throw OutOfRange("tune_beam_splitter: spec must be a barrier");
  }
  SolverConfig probe_cfg = cfg;
  probe_cfg.output_every = cfg.n_steps;  // probes keep only first/last snapshot

  BeamSplitterTuning tuning;
  auto probe = [&](double height) {
    barrier.height = height;
    const RunResult r = run_experiment(initial, barrier, probe_cfg);
    ++tuning.probes;
    return transmitted_fraction(r.snapshots.back(), cut);
  };

  const std::vector<double> zero_v(initial.psi.size(), 0.0);
  double lo = 0.0;  // no barrier: fully transmitted
  double hi = 2.0 * core::energy_expectation(initial, zero_v);
  double t_hi = probe(hi);
  int expand = 0;
  while (t_hi > 0.5 && expand < 40) {
    lo = hi;
    hi *= 2.0;
    t_hi = probe(hi);
    ++expand;
  }
  if (t_hi > 0.5) {
    throw OutOfRange("tune_beam_splitter: could not bracket T = 0.5");
  }

  double mid = hi, t_mid = t_hi;
  for (int it = 0; it < 80; ++it) {
    mid = 0.5 * (lo + hi);
    t_mid = probe(mid);
    if (std::abs(t_mid - 0.5) <= tol) break;
    if (t_mid > 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (std::abs(t_mid - 0.5) > tol) {
    throw OutOfRange("tune_beam_splitter: bisection failed to reach tolerance");
  }
  tuning.height = mid;
  tuning.transmitted = t_mid;
  return tuning;
}

BranchSplitReport branch_split_check(const core::WaveField& at_cut, double cut,
                                     const PotentialSpec& further,
                                     const SolverConfig& cfg) {
  const int n = at_cut.grid.n_points;
  const double dx = at_cut.grid.dx();
  BranchSplitReport report;

  // probability in a band around the cut; separated lobes leave it empty
  const double band = std::max(4.0 * dx, 0.01 * at_cut.grid.length());
  {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(at_cut.grid.x(i) - cut) <= band) s += std::norm(at_cut.psi[i]);
    }
    const double total = core::norm(at_cut);
    report.lobe_overlap = s * dx / (total * total);
  }
  if (report.lobe_overlap > 1e-3) {
    throw LobesNotSeparated("branch_split_check: " +
                            std::to_string(report.lobe_overlap) +
                            " probability in the cut band");
  }

  WaveField left = at_cut, right = at_cut;
  for (int i = 0; i < n; ++i) {
    if (at_cut.grid.x(i) >= cut) {
      left.psi[i] = 0.0;
    } else {
      right.psi[i] = 0.0;
    }
  }

  const RunResult rl = run_experiment(left, further, cfg);
  const RunResult rr = run_experiment(right, further, cfg);
  const RunResult rs = run_experiment(at_cut, further, cfg);
  const WaveField& fl = rl.snapshots.back();
  const WaveField& fr = rr.snapshots.back();
  const WaveField& fs = rs.snapshots.back();

  double err2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    err2 += w * std::norm(fl.psi[i] + fr.psi[i] - fs.psi[i]);
  }
  report.independent_propagation_error = std::sqrt(err2 * dx);

  double add_err = 0.0;
  double max_l = 0.0, max_r = 0.0;
  std::vector<double> rho_l(n), rho_r(n), rho_s(n);
  for (int i = 0; i < n; ++i) {
    rho_l[i] = std::norm(fl.psi[i]);
    rho_r[i] = std::norm(fr.psi[i]);
    rho_s[i] = std::norm(fs.psi[i]);
    add_err += std::abs(rho_s[i] - rho_l[i] - rho_r[i]);
    max_l = std::max(max_l, rho_l[i]);
    max_r = std::max(max_r, rho_r[i]);
  }
  report.density_additivity_error = add_err * dx;

  // fringe contrast where both propagated lobes have appreciable support
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (int i = 0; i < n; ++i) {
    if (rho_l[i] > 0.02 * max_l && rho_r[i] > 0.02 * max_r) {
      if (!any) {
        lo = hi = rho_s[i];
        any = true;
      } else {
        lo = std::min(lo, rho_s[i]);
        hi = std::max(hi, rho_s[i]);
      }
    }
  }
  report.visibility = any && (hi + lo) > 0.0 ? (hi - lo) / (hi + lo) : 0.0;
  return report;
}

}  // namespace interp::tdse
