#pragma once

#include <omp.h>

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

namespace voxbetti {

/// Environment override for the worker count.
inline constexpr const char* kWorkersEnv = "VOXBETTI_WORKERS";

/// requested > 0 wins; otherwise VOXBETTI_WORKERS; otherwise the OpenMP default.
inline int resolve_workers(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

/// Runs fn(i) for i in [0, n) on `workers` threads with dynamic scheduling.
/// Results must be written to per-index slots, so output order never depends
/// on the worker count. The first exception (by index) is rethrown.
template <typename Fn>
void parallel_for_index(std::size_t n, int workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace voxbetti
