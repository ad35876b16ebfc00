// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace interp::fft {

using cdouble = std::complex<double>;

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Radix-2 transform plan for a fixed power-of-two size: bit-reversal
// permutation plus precomputed stage twiddles. forward computes
// X_k = sum_j x_j exp(-2*pi*i*jk/n); inverse undoes it (including the 1/n).
class Plan {
 public:
  explicit Plan(std::size_t n);

  void forward(cdouble* a) const { transform(a, false); }
  void inverse(cdouble* a) const { transform(a, true); }

  void forward(std::vector<cdouble>& a) const;
  void inverse(std::vector<cdouble>& a) const;

  std::size_t size() const { return n_; }

 private:
  void transform(cdouble* a, bool inv) const;

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<cdouble> w_;  // concatenated per-stage twiddles, forward sign
};

}  // namespace interp::fft
