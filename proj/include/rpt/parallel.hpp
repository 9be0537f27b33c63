#pragma once

#include <exception>
#include <mutex>

#include <Eigen/Core>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rpt {

enum class Execution { Serial, Parallel };

struct RunOptions {
  Execution execution = Execution::Parallel;
  int threads = 0;  // 0: OpenMP default
};

inline int available_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Calls body(i) for i in [0, n). Each index must write only its own output
/// slot; the parallel path then yields the same results as the serial one.
/// The first exception thrown by any index is rethrown on the caller.
template <typename Body>
void for_each_index(Eigen::Index n, const RunOptions& opts, Body&& body) {
  if (opts.execution == Execution::Serial || n < 2) {
    for (Eigen::Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
#ifdef _OPENMP
  const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
#endif
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rpt
