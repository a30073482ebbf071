#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mca::parallel {

// Fixed-shard parallel execution: work is split into n_shards independent
// pieces whose results the caller merges in shard order. Outputs are then
// identical for any thread count, including the serial path.
template <class Fn>
void for_shards(int n_shards, bool serial, Fn&& fn) {
  if (serial) {
    for (int s = 0; s < n_shards; ++s) fn(s);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int s = 0; s < n_shards; ++s) fn(s);
}

// contiguous [begin, end) range of shard `s` when len items split n ways
inline std::pair<std::size_t, std::size_t> shard_range(std::size_t len, int s, int n) {
  const std::size_t lo = len * static_cast<std::size_t>(s) / n;
  const std::size_t hi = len * static_cast<std::size_t>(s + 1) / n;
  return {lo, hi};
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace mca::parallel
