#ifndef HHONS_PARALLEL_HPP
#define HHONS_PARALLEL_HPP

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hhons {

/// Execution policy for element-local kernels. Serial is the reference
/// implementation; Parallel runs the same per-element work under OpenMP.
/// Each iteration writes only to its own slot, so both policies produce
/// bitwise identical results.
enum class Exec { Serial, Parallel };

/// Apply fn(i) for i in [0, n). Iterations must be independent.
template <typename F>
void for_each_index(Exec exec, std::ptrdiff_t n, F&& fn) {
#ifdef _OPENMP
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

}  // namespace hhons

#endif
