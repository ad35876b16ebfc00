// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "interp/rng.hpp"

using interp::rng::Stream;

TEST_SUITE("rng") {

TEST_CASE("streams are deterministic and order-independent") {
  Stream a(42, 7);
  Stream b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next() == b.next());

  // Drawing from one stream never disturbs another.
  Stream c(42, 8);
  Stream d(42, 8);
  Stream noise(42, 9);
  for (int i = 0; i < 10; ++i) noise.next();
  for (int i = 0; i < 100; ++i) REQUIRE(c.next() == d.next());
}

TEST_CASE("distinct stream ids decorrelate") {
  Stream a(42, 0);
  Stream b(42, 1);
  int same = 0;
  for (int i = 0; i < 1000; ++i)
    if (a.next() == b.next()) ++same;
  CHECK(same == 0);

  // Same id, different seed.
  Stream c(1, 5);
  Stream d(2, 5);
  same = 0;
  for (int i = 0; i < 1000; ++i)
    if (c.next() == d.next()) ++same;
  CHECK(same == 0);
}

TEST_CASE("u01 stays in the open unit interval") {
  Stream s(123, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.u01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("u01 mean and variance match uniform") {
  Stream s(7, 3);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.u01();
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  // 4-sigma bands: sd(mean) = 1/sqrt(12 n).
  CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var - 1.0 / 12.0) < 4.0 * 0.0745 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("exponential has the right mean") {
  Stream s(99, 1);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += s.exponential(2.0);
  // mean 1/2, sd of the mean = (1/2)/sqrt(n)
  CHECK(std::abs(sum / n - 0.5) < 4.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("normal has unit variance") {
  Stream s(5, 2);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("below is unbiased over small ranges") {
  Stream s(11, 0);
  std::vector<int> counts(7, 0);
  const int n = 140000;
  for (int i = 0; i < n; ++i) ++counts[s.below(7)];
  for (int k = 0; k < 7; ++k) {
    const double expect = n / 7.0;
    CHECK(std::abs(counts[k] - expect) < 4.0 * std::sqrt(expect));
  }
}

}  // TEST_SUITE
