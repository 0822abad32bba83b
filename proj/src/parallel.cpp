#include "wpd/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace wpd {

int configure_threads_from_env() {
  const char* env = std::getenv("WPD_LAB_THREADS");
  if (env != nullptr) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) omp_set_num_threads(std::min(cap, omp_get_num_procs()));
    } catch (const std::exception&) {
      // Unparseable values leave the OpenMP default untouched.
    }
  }
  return omp_get_max_threads();
}

}  // namespace wpd
