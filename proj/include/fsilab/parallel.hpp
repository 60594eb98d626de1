#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fsilab {

// All assembly kernels come in two flavours sharing the same per-element
// math: a plain serial loop (the reference, kept for testing) and an
// OpenMP two-phase version (parallel per-element compute, then a serial
// scatter in element order). Both produce bit-identical results because
// the scatter order never depends on the schedule.
enum class AssemblyMode { Serial, Parallel };

template <class Fn>
inline void parallel_for(int n, AssemblyMode mode, Fn&& fn) {
  if (mode == AssemblyMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) fn(i);
  } else {
    for (int i = 0; i < n; ++i) fn(i);
  }
}

}  // namespace fsilab
