// Copyright (c) 2026 interp-lab developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace interp::parallel {

// Worker-thread cap. INTERP_LAB_THREADS caps the pool; 0 or unset means all
// available cores.
inline int max_threads() {
  int avail = 1;
#ifdef _OPENMP
  avail = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("INTERP_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0 && v < avail) avail = static_cast<int>(v);
  }
  return avail < 1 ? 1 : avail;
}

// Data-parallel loop over [0, n). Bodies must write only to slots owned by
// their index (or accumulate integers elsewhere); floating-point reductions
// belong outside the loop so results never depend on the thread count.
template <typename F>
void parallel_for(std::int64_t n, F&& body) {
#ifdef _OPENMP
  const int nt = max_threads();
  if (nt > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

// Serial reference with identical semantics; kept so tests and the benchmark
// can compare the two paths.
template <typename F>
void serial_for(std::int64_t n, F&& body) {
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace interp::parallel
