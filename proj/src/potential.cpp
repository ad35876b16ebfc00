// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/potential.hpp"

#include <cmath>

namespace interp::tdse {

PotentialSpec PotentialSpec::free_space() { return {}; }

PotentialSpec PotentialSpec::harmonic(double omega) {
  if (!(omega > 0.0)) throw OutOfRange("harmonic potential: omega must be > 0");
  PotentialSpec p;
  p.kind = Kind::harmonic;
  p.omega = omega;
  return p;
}

PotentialSpec PotentialSpec::gaussian_barrier(double height, double center,
                                              double width) {
  if (!(width > 0.0)) throw OutOfRange("gaussian_barrier: width must be > 0");
  PotentialSpec p;
  p.kind = Kind::gaussian_barrier;
  p.height = height;
  p.center = center;
  p.width = width;
  return p;
}

PotentialSpec PotentialSpec::double_slit(double center, double height,
                                         double thickness, double slit_width,
                                         double slit_separation) {
  if (!(thickness > 0.0) || !(slit_width > 0.0) || !(slit_separation > 0.0)) {
    throw OutOfRange("double_slit: thickness/slit_width/slit_separation must be > 0");
  }
  if (slit_separation <= slit_width) {
    throw OutOfRange("double_slit: slit_separation must exceed slit_width");
  }
  PotentialSpec p;
  p.kind = Kind::double_slit;
  p.center = center;
  p.height = height;
  p.thickness = thickness;
  p.slit_width = slit_width;
  p.slit_separation = slit_separation;
  return p;
}

PotentialSpec PotentialSpec::beam_splitter(double center, double width,
                                           double height) {
  if (!(width > 0.0)) throw OutOfRange("beam_splitter: width must be > 0");
  PotentialSpec p;
  p.kind = Kind::beam_splitter;
  p.center = center;
  p.width = width;
  p.height = height;
  return p;
}

std::vector<double> PotentialSpec::evaluate(const core::Grid& grid) const {
  std::vector<double> v(static_cast<std::size_t>(grid.n_points), 0.0);
  switch (kind) {
    case Kind::free:
      break;
    case Kind::harmonic:
      for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        v[i] = 0.5 * omega * omega * x * x;
      }
      break;
    case Kind::gaussian_barrier:
    case Kind::beam_splitter:
      for (int i = 0; i < grid.n_points; ++i) {
        const double u = (grid.x(i) - center) / width;
        v[i] = height * std::exp(-0.5 * u * u);
      }
      break;
    case Kind::double_slit: {
      // Solid wall spanning both windows plus `thickness` of material beyond
      // each outer window edge; the windows (width slit_width, centers
      // slit_separation apart) are the only transparent parts.
      const double off = 0.5 * slit_separation;
      const double half_extent = off + 0.5 * slit_width + thickness;
      for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        if (std::abs(x - center) > half_extent) continue;
        const bool in_window =
            std::abs(x - (center - off)) <= 0.5 * slit_width ||
            std::abs(x - (center + off)) <= 0.5 * slit_width;
        if (!in_window) v[i] = height;
      }
      break;
    }
  }
  return v;
}

double PotentialSpec::max_abs(const core::Grid& grid) const {
  double m = 0.0;
  for (double x : evaluate(grid)) m = std::max(m, std::abs(x));
  return m;
}

std::string PotentialSpec::kind_name() const {
  switch (kind) {
    case Kind::free: return "free";
    case Kind::harmonic: return "harmonic";
    case Kind::gaussian_barrier: return "gaussian_barrier";
    case Kind::double_slit: return "double_slit";
    case Kind::beam_splitter: return "beam_splitter";
  }
  return "?";
}

}  // namespace interp::tdse
