#include "spinforge/threading.hpp"

#include <cstdlib>
#include <string>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spinforge {

namespace {
int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}
}  // namespace

void set_thread_count(int n) {
  if (n <= 0) n = hardware_threads();
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int env_thread_override() {
  const char* v = std::getenv("SPINFORGE_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (end == v || n <= 0 || n > 4096) return 0;
  return static_cast<int>(n);
}

int resolve_thread_count(int requested) {
  int env = env_thread_override();
  if (env > 0) return env;
  if (requested > 0) return requested;
  return hardware_threads();
}

}  // namespace spinforge
