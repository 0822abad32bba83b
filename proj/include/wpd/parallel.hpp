#pragma once

// OpenMP helpers. Every parallel kernel in the library takes an Exec tag;
// Exec::serial runs the reference loop and must produce bit-identical
// results, which the test suite checks.

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#include <omp.h>

namespace wpd {

enum class Exec { serial, parallel };

/// Apply the WPD_LAB_THREADS cap (if set) to the OpenMP pool. Returns the
/// resulting thread count.
int configure_threads_from_env();

/// out[i] = f(i) for i in [0, n). Results land in index order regardless of
/// scheduling. Exceptions thrown by f are rethrown on the calling thread.
template <class F>
auto ordered_map(std::size_t n, F&& f, Exec exec) -> std::vector<decltype(f(std::size_t{0}))> {
  using T = decltype(f(std::size_t{0}));
  std::vector<T> out(n);
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace wpd
