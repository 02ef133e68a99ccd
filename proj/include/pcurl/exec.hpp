#pragma once

// Element-loop execution. Every data-parallel kernel in the library goes
// through these two helpers so the serial path stays available as the
// reference implementation (and as the bitwise-deterministic mode).

#include <cstddef>

namespace pcurl {

enum class Exec { serial, parallel };

/// Calls fn(i) for i in [0, n). Iterations must be independent.
template <class Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
  const auto count = static_cast<long long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
  }
}

/// Sum of fn(i) over [0, n). The parallel path reassociates the sum, so
/// results agree with the serial path only to rounding.
template <class Fn>
double sum_over(Exec exec, std::size_t n, Fn&& fn) {
  const auto count = static_cast<long long>(n);
  double total = 0.0;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (long long i = 0; i < count; ++i) total += fn(static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < count; ++i) total += fn(static_cast<std::size_t>(i));
  }
  return total;
}

}  // namespace pcurl
