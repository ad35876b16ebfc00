// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "interp/core_field.hpp"

namespace interp::tdse {

// Static potential catalog. All shapes are evaluated onto a grid once per
// run; there is no time dependence beyond what callers compose themselves.
struct PotentialSpec {
  enum class Kind { free, harmonic, gaussian_barrier, double_slit, beam_splitter };

  Kind kind = Kind::free;
  double omega = 1.0;       // harmonic
  double height = 0.0;      // barriers; beam_splitter: <= 0 means auto-tune
  double center = 0.0;      // barriers
  double width = 1.0;       // gaussian_barrier / beam_splitter std-dev
  double thickness = 1.0;   // double_slit wall thickness
  double slit_width = 0.5;  // double_slit window width
  double slit_separation = 2.0;

  static PotentialSpec free_space();
  static PotentialSpec harmonic(double omega);
  static PotentialSpec gaussian_barrier(double height, double center, double width);
  static PotentialSpec double_slit(double center, double height, double thickness,
                                   double slit_width, double slit_separation);
  static PotentialSpec beam_splitter(double center, double width, double height);

  std::vector<double> evaluate(const core::Grid& grid) const;
  double max_abs(const core::Grid& grid) const;
  std::string kind_name() const;
};

}  // namespace interp::tdse
