// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace interp::rng {

// SplitMix64 finalizer; used to expand (seed, stream) pairs into engine state.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** with counter-based stream seeding. Stream (seed, i) is
// decorrelated from stream (seed, j != i), so every ensemble member, trial
// or run gets its own stream and the results do not depend on execution
// order or thread count.
class Stream {
 public:
  Stream() : Stream(0, 0) {}

  Stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t x = mix64(seed) ^ mix64(0xd2b74407b1ce6e93ULL * (stream_id + 1));
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      w = mix64(x);
    }
    if (!(s_[0] | s_[1] | s_[2] | s_[3])) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0, 1); never returns an endpoint, so it is
  // safe to pass through std::log.
  double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  // Exponential waiting time with the given rate (mean 1/rate).
  double exponential(double rate) { return -std::log(u01()) / rate; }

  // Standard normal via Box-Muller; the spare deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(u01()));
    const double theta = 2.0 * std::numbers::pi * u01();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform integer in [0, n) without modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace interp::rng
