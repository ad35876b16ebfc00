// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/core_field.hpp"

#include <algorithm>
#include <cmath>

namespace interp::core {

Grid Grid::make(double x_min, double x_max, int n_points) {
  if (!(x_max > x_min)) {
    throw OutOfRange("grid: x_max must exceed x_min");
  }
  if (n_points < 8) {
    throw OutOfRange("grid: n_points must be >= 8, got " +
                     std::to_string(n_points));
  }
  return Grid{x_min, x_max, n_points};
}

WaveField make_field(const Grid& grid, double hbar, double mass) {
  WaveField f;
  f.grid = grid;
  f.psi.assign(static_cast<std::size_t>(grid.n_points), cdouble{0.0, 0.0});
  f.hbar = hbar;
  f.mass = mass;
  return f;
}

namespace {

void check_sized(const WaveField& f) {
  if (static_cast<int>(f.psi.size()) != f.grid.n_points) {
    throw GridMismatch("field size does not match its grid");
  }
}

double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

double norm(const WaveField& f) {
  check_sized(f);
  const int n = f.grid.n_points;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += trap_weight(i, n) * std::norm(f.psi[i]);
  return std::sqrt(s * f.grid.dx());
}

WaveField normalized(WaveField f) {
  const double nrm = norm(f);
  if (!(nrm > 0.0)) throw OutOfRange("cannot normalize a zero field");
  for (auto& a : f.psi) a /= nrm;
  return f;
}

cdouble overlap(const WaveField& a, const WaveField& b) {
  check_sized(a);
  check_sized(b);
  if (!(a.grid == b.grid)) throw GridMismatch("overlap: grids differ");
  const int n = a.grid.n_points;
  cdouble s{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    s += trap_weight(i, n) * std::conj(a.psi[i]) * b.psi[i];
  }
  return s * a.grid.dx();
}

double node_threshold(const WaveField& f) {
  double m = 0.0;
  for (const auto& a : f.psi) m = std::max(m, std::abs(a));
  return 1e-14 * m;
}

DensityCurrent density(const WaveField& f) {
  check_sized(f);
  DensityCurrent dc;
  dc.t = f.t;
  dc.rho.resize(f.psi.size());
  dc.j.assign(f.psi.size(), 0.0);
  for (std::size_t i = 0; i < f.psi.size(); ++i) dc.rho[i] = std::norm(f.psi[i]);
  return dc;
}

DensityCurrent current(const WaveField& f) {
  DensityCurrent dc = density(f);
  const int n = f.grid.n_points;
  const double thr = node_threshold(f);
  const double pref = f.hbar / (f.mass * 2.0 * f.grid.dx());
  for (int i = 1; i + 1 < n; ++i) {
    if (std::abs(f.psi[i]) < thr) continue;  // node convention: j = 0
    const cdouble d = f.psi[i + 1] - f.psi[i - 1];
    dc.j[i] = pref * std::imag(std::conj(f.psi[i]) * d);
  }
  return dc;
}

double continuity_residual(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid)) throw GridMismatch("continuity_residual: grids differ");
  const double dt = b.t - a.t;
  if (!(dt > 0.0)) throw OutOfRange("continuity_residual: requires b.t > a.t");
  const DensityCurrent da = current(a);
  const DensityCurrent db = current(b);
  const int n = a.grid.n_points;
  const double inv2dx = 1.0 / (2.0 * a.grid.dx());
  double worst = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double drho = (db.rho[i] - da.rho[i]) / dt;
    const double jp = 0.5 * (da.j[i + 1] + db.j[i + 1]);
    const double jm = 0.5 * (da.j[i - 1] + db.j[i - 1]);
    worst = std::max(worst, std::abs(drho + (jp - jm) * inv2dx));
  }
  return worst;
}

double boundary_mass(const WaveField& f, int cells) {
  check_sized(f);
  const int n = f.grid.n_points;
  if (cells < 1 || 2 * cells >= n) throw OutOfRange("boundary_mass: bad cell count");
  double s = 0.0;
  for (int i = 0; i <= cells; ++i) {
    s += trap_weight(i, n) * std::norm(f.psi[i]);
    const int k = n - 1 - i;
    s += trap_weight(k, n) * std::norm(f.psi[k]);
  }
  return s * f.grid.dx();
}

double expectation_x(const WaveField& f) {
  check_sized(f);
  const int n = f.grid.n_points;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += trap_weight(i, n) * f.grid.x(i) * std::norm(f.psi[i]);
  }
  return s * f.grid.dx();
}

double expectation_x2(const WaveField& f) {
  check_sized(f);
  const int n = f.grid.n_points;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = f.grid.x(i);
    s += trap_weight(i, n) * x * x * std::norm(f.psi[i]);
  }
  return s * f.grid.dx();
}

double energy_expectation(const WaveField& f, const std::vector<double>& v) {
  check_sized(f);
  if (v.size() != f.psi.size()) throw GridMismatch("energy: potential size mismatch");
  const int n = f.grid.n_points;
  const double dx = f.grid.dx();
  const double kin_pref = f.hbar * f.hbar / (2.0 * f.mass);
  // kinetic part via |dpsi/dx|^2 with one-sided cells: sum over links
  double kin = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    kin += std::norm((f.psi[i + 1] - f.psi[i]) / dx);
  }
  kin *= kin_pref * dx;
  double pot = 0.0;
  for (int i = 0; i < n; ++i) pot += trap_weight(i, n) * v[i] * std::norm(f.psi[i]);
  pot *= dx;
  return kin + pot;
}

}  // namespace interp::core
