#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mollikit::parallel {

/// 0 means "all available cores".
inline int resolve_threads(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

/// Runs body(i) for i in [0, count). Each index is written by exactly one
/// worker, so results stored by index are independent of scheduling.
template <class Body>
void for_each_index(std::size_t count, int threads, Body&& body) {
  const int workers = resolve_threads(threads);
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const auto n = static_cast<long long>(count);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace mollikit::parallel
