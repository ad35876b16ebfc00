// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include "interp/fft.hpp"

#include <numbers>

#include "interp/errors.hpp"

namespace interp::fft {

Plan::Plan(std::size_t n) : n_(n) {
  if (!is_pow2(n) || n < 2) {
    throw OutOfRange("fft size must be a power of two >= 2, got " +
                     std::to_string(n));
  }
  rev_.resize(n);
  rev_[0] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    rev_[i] = (rev_[i >> 1] >> 1) | ((i & 1) ? n >> 1 : 0);
  }
  w_.reserve(n - 1);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double step = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t k = 0; k < len / 2; ++k) {
      w_.push_back(std::polar(1.0, step * static_cast<double>(k)));
    }
  }
}

void Plan::transform(cdouble* a, bool inv) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const cdouble* tw = w_.data() + (len / 2 - 1);  // stage offset: 1+2+...+len/4

    const std::size_t half = len / 2;
    for (std::size_t block = 0; block < n_; block += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cdouble w = inv ? std::conj(tw[k]) : tw[k];
        cdouble& u = a[block + k];
        cdouble& v = a[block + k + half];
        const cdouble t = v * w;
        v = u - t;
        u += t;
      }
    }
  }
  if (inv) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= scale;
  }
}

void Plan::forward(std::vector<cdouble>& a) const {
  if (a.size() != n_) throw OutOfRange("fft input size mismatch");
  transform(a.data(), false);
}

void Plan::inverse(std::vector<cdouble>& a) const {
  if (a.size() != n_) throw OutOfRange("fft input size mismatch");
  transform(a.data(), true);
}

}  // namespace interp::fft
