// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "interp/errors.hpp"

namespace interp::core {

using cdouble = std::complex<double>;

// Uniform 1-D grid; both endpoints are grid points.
struct Grid {
  double x_min = -1.0;
  double x_max = 1.0;
  int n_points = 0;

  double dx() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + i * dx(); }
  double length() const { return x_max - x_min; }
  bool operator==(const Grid&) const = default;

  // Validates x_max > x_min and n_points >= 8.
  static Grid make(double x_min, double x_max, int n_points);
};

// Complex scalar field on a grid. hbar and mass default to natural units;
// every operation reads them from here rather than from globals.
struct WaveField {
  Grid grid;
  std::vector<cdouble> psi;
  double t = 0.0;
  double hbar = 1.0;
  double mass = 1.0;
};

struct DensityCurrent {
  std::vector<double> rho;
  std::vector<double> j;
  double t = 0.0;
};

WaveField make_field(const Grid& grid, double hbar = 1.0, double mass = 1.0);

// Trapezoid L2 norm (sqrt of total probability).
double norm(const WaveField& f);

// Unit-norm copy.
WaveField normalized(WaveField f);

// Trapezoid inner product <a|b>; throws GridMismatch.
cdouble overlap(const WaveField& a, const WaveField& b);

// Amplitudes below this are treated as nodes (velocity/current forced to 0).
double node_threshold(const WaveField& f);

// rho = |psi|^2 (j left zero).
DensityCurrent density(const WaveField& f);

// rho and the probability current j = (hbar/m) Im(psi* dpsi/dx), centered
// differences on interior points, j = 0 at the two edge points and at nodes.
DensityCurrent current(const WaveField& f);

// max over interior points of |(rho_b - rho_a)/dt + d/dx((j_a+j_b)/2)| with
// centered differences. Requires identical grids and b.t > a.t.
double continuity_residual(const WaveField& a, const WaveField& b);

// Probability within `cells` grid cells of either edge (leak diagnostic).
double boundary_mass(const WaveField& f, int cells = 5);

double expectation_x(const WaveField& f);
double expectation_x2(const WaveField& f);

// <H> with a centered-difference kinetic term and potential sampled on the
// grid; used for energy-drift diagnostics.
double energy_expectation(const WaveField& f, const std::vector<double>& v);

}  // namespace interp::core
